mod config;
mod plot;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use strat_core::datasets::{add_noise, derive_seed, lemniscate_band, lemniscate_family};
use strat_core::io::{read_table_file, write_table_file, CloudTable};
use strat_core::localization::magnification_bundle;
use strat_core::phi::{forget_str, phi_pushforward, singular_clusters, strong_str, Phi};
use strat_core::sample_spaces::{
    hausdorff, local_distance, stratified_distance, strong_distance, LocalSample, PointCloud,
    StronglyStratifiedSample,
};
use strat_core::strat_persistence::{
    diagification, diagram_barcode_distance, stratified_barcodes, stratified_cech,
    StratifiedBarcode,
};

use config::{ConfigError, PipelineConfig, Sampler};

#[derive(Parser)]
#[command(
    name = "strat",
    version,
    about = "Stratification learning and stratified persistence for point clouds"
)]
struct Cli {
    /// Pipeline configuration file (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the configured output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Leave timestamps out of the SVG output.
    #[arg(long, global = true)]
    reproducible: bool,
    /// Extra `key=value` settings, applied after the config file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the configured dataset into points.csv.
    Generate,
    /// Φ-stratify a point cloud into stratified.csv and stratify_summary.json.
    Stratify {
        /// Input file [default: <out>/points.csv]
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Write the three pieces of the stratification diagram.
    Diagram {
        /// Input file [default: <out>/stratified.csv]
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Per-flag barcodes of ε-pers as barcode.json and barcode.svg.
    Persist {
        /// Input file [default: <out>/stratified.csv]
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Re-render barcode.svg from a barcode JSON file.
    Plot {
        /// Input file [default: <out>/barcode.json]
        #[arg(long)]
        input: Option<PathBuf>,
        /// Longest bars kept per flag panel [default: plot.top_k]
        #[arg(long)]
        top_k: Option<usize>,
    },
    /// Print a distance between two inputs.
    Dist {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "hausdorff")]
        metric: Metric,
        /// Homology degree for `diagram-barcode`.
        #[arg(long, default_value_t = 0)]
        degree: usize,
    },
    /// generate (unless an input is configured), stratify, diagram, persist.
    Pipeline,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Hausdorff,
    Local,
    Stratified,
    Strong,
    DiagramBarcode,
}

struct Ctx {
    cfg: PipelineConfig,
    reproducible: bool,
}

impl Ctx {
    fn path(&self, name: &str) -> PathBuf {
        self.cfg.out.join(name)
    }

    fn ensure_out(&self) -> Result<()> {
        fs::create_dir_all(&self.cfg.out)
            .with_context(|| format!("creating {}", self.cfg.out.display()))
    }

    fn input_or(&self, explicit: Option<PathBuf>, default: &str) -> PathBuf {
        explicit.unwrap_or_else(|| self.path(default))
    }
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn cmd_generate(ctx: &Ctx) -> Result<PathBuf> {
    let Some(spec) = &ctx.cfg.dataset else {
        return Err(ConfigError("`generate` needs a `dataset` entry".into()).into());
    };
    let seed = derive_seed(ctx.cfg.seed, 0);
    let mut cloud = match spec.sampler {
        Sampler::Curve => spec.id.sample(spec.n, seed)?,
        Sampler::Rejection { s } => lemniscate_family(s, spec.n, seed)?,
        Sampler::Band { d } => lemniscate_band(d, spec.n, seed)?,
    };
    if spec.noise > 0.0 {
        cloud = add_noise(&cloud, spec.noise, derive_seed(ctx.cfg.seed, 1))?;
    }
    ctx.ensure_out()?;
    let path = ctx.path("points.csv");
    write_table_file(&path, &CloudTable::plain(cloud))?;
    println!(
        "wrote {} ({} points, {})",
        path.display(),
        spec.n,
        spec.id.name()
    );
    Ok(path)
}

fn cmd_stratify(ctx: &Ctx, input: Option<PathBuf>) -> Result<PathBuf> {
    let input = input
        .or_else(|| ctx.cfg.input.clone())
        .unwrap_or_else(|| ctx.path("points.csv"));
    let table = read_table_file(&input).with_context(|| format!("reading {}", input.display()))?;
    let phi = Phi::new(ctx.cfg.phi)?;
    let strong = phi_pushforward(&magnification_bundle(&table.cloud, ctx.cfg.zeta)?, &phi)?;
    let strat = forget_str(&strong, ctx.cfg.u)?;
    let clusters = singular_clusters(&strat, ctx.cfg.cluster_radius);
    ctx.ensure_out()?;
    let path = ctx.path("stratified.csv");
    let out = CloudTable {
        cloud: table.cloud,
        stratum: Some(strat.singular_mask().to_vec()),
        s: Some(strong.values().to_vec()),
    };
    write_table_file(&path, &out)?;
    let summary = json!({
        "points": strat.cloud().len(),
        "singular": strat.singular_count(),
        "clusters": clusters.len(),
        "cluster_radius": ctx.cfg.cluster_radius,
        "zeta": ctx.cfg.zeta,
        "u": ctx.cfg.u,
    });
    write_json(&ctx.path("stratify_summary.json"), &summary)?;
    println!(
        "{} of {} points singular, {} clusters at radius {}",
        strat.singular_count(),
        strat.cloud().len(),
        clusters.len(),
        ctx.cfg.cluster_radius
    );
    Ok(path)
}

/// The strongly stratified sample ε-pers starts from: the distance to the
/// `p` rows when a `stratum` column is present, else the `s` column as is.
fn strong_input(ctx: &Ctx, path: &Path) -> Result<StronglyStratifiedSample> {
    let table = read_table_file(path).with_context(|| format!("reading {}", path.display()))?;
    if table.stratum.is_some() {
        let strat = table.stratified()?;
        let strat = if ctx.cfg.subsample > 0.0 {
            strat.subsample(ctx.cfg.subsample)
        } else {
            strat
        };
        Ok(strong_str(&strat))
    } else if table.s.is_some() {
        Ok(table.strongly_stratified()?)
    } else {
        bail!(
            "{} has no stratum data (`stratum` or `s` column)",
            path.display()
        )
    }
}

fn cmd_diagram(ctx: &Ctx, input: Option<PathBuf>) -> Result<()> {
    let input = ctx.input_or(input, "stratified.csv");
    let diagram = diagification(&strong_input(ctx, &input)?, &ctx.cfg.v)?;
    ctx.ensure_out()?;
    let mut sizes = serde_json::Map::new();
    for (name, part) in ["p", "pq", "q"].into_iter().zip(diagram.components()) {
        write_table_file(
            ctx.path(&format!("diagram_{name}.csv")),
            &CloudTable::plain(part.clone()),
        )?;
        sizes.insert(name.into(), part.len().into());
    }
    write_json(
        &ctx.path("diagram.json"),
        &json!({ "v_low": ctx.cfg.v.v_low, "v_up": ctx.cfg.v.v_up, "sizes": sizes }),
    )?;
    println!("diagram sizes {}", serde_json::Value::Object(sizes));
    Ok(())
}

fn stamp(ctx: &Ctx) -> Option<String> {
    if ctx.reproducible {
        return None;
    }
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    Some(format!("at unix time {secs}"))
}

fn write_svg(ctx: &Ctx, barcode: &StratifiedBarcode, k: usize) -> Result<PathBuf> {
    let path = ctx.path("barcode.svg");
    fs::write(&path, plot::render(barcode, k, stamp(ctx).as_deref()))?;
    Ok(path)
}

fn cmd_persist(ctx: &Ctx, input: Option<PathBuf>) -> Result<()> {
    let input = ctx.input_or(input, "stratified.csv");
    let strong = strong_input(ctx, &input)?;
    let filtration = stratified_cech(&diagification(&strong, &ctx.cfg.v)?, ctx.cfg.caps)?;
    let barcode = stratified_barcodes(&filtration, &ctx.cfg.h0_scales)?;
    ctx.ensure_out()?;
    write_json(&ctx.path("barcode.json"), &barcode)?;
    let svg = write_svg(ctx, &barcode, ctx.cfg.top_k)?;
    for (name, bc) in ["p", "pq", "q"].iter().zip(barcode.flags()) {
        let long = bc
            .bars(0)
            .iter()
            .filter(|b| b.birth <= 0.02 && b.length() >= 0.1)
            .count();
        println!(
            "{name:>2}: {} H0 bars ({long} long), {} H1 bars",
            bc.bars(0).len(),
            bc.bars(1).len()
        );
    }
    println!(
        "wrote {} and {}",
        ctx.path("barcode.json").display(),
        svg.display()
    );
    Ok(())
}

fn read_barcode(path: &Path) -> Result<StratifiedBarcode> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("{} is not a stratified barcode", path.display()))
}

fn cmd_plot(ctx: &Ctx, input: Option<PathBuf>, top_k: Option<usize>) -> Result<()> {
    let barcode = read_barcode(&ctx.input_or(input, "barcode.json"))?;
    let k = top_k.unwrap_or(ctx.cfg.top_k);
    if k == 0 {
        return Err(ConfigError("--top-k must be at least 1".into()).into());
    }
    ctx.ensure_out()?;
    println!("wrote {}", write_svg(ctx, &barcode, k)?.display());
    Ok(())
}

fn cmd_dist(a: &Path, b: &Path, metric: Metric, degree: usize) -> Result<f64> {
    let table = |p: &Path| read_table_file(p).with_context(|| format!("reading {}", p.display()));
    Ok(match metric {
        Metric::Hausdorff => hausdorff(&table(a)?.cloud, &table(b)?.cloud)?,
        Metric::Local => {
            let local = |c: PointCloud| LocalSample::new(c);
            local_distance(&local(table(a)?.cloud), &local(table(b)?.cloud))?
        }
        Metric::Stratified => {
            stratified_distance(&table(a)?.stratified()?, &table(b)?.stratified()?)?
        }
        Metric::Strong => strong_distance(
            &table(a)?.strongly_stratified()?,
            &table(b)?.strongly_stratified()?,
        )?,
        Metric::DiagramBarcode => {
            diagram_barcode_distance(&read_barcode(a)?, &read_barcode(b)?, degree)
        }
    })
}

fn format_distance(d: f64) -> String {
    if d.is_infinite() {
        "inf".into()
    } else {
        format!("{d:.9}")
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = PipelineConfig::load(cli.config.as_deref(), &cli.set)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = cli.out {
        cfg.out = out;
    }
    let ctx = Ctx {
        cfg,
        reproducible: cli.reproducible,
    };
    match cli.command {
        Command::Generate => cmd_generate(&ctx).map(drop),
        Command::Stratify { input } => cmd_stratify(&ctx, input).map(drop),
        Command::Diagram { input } => cmd_diagram(&ctx, input),
        Command::Persist { input } => cmd_persist(&ctx, input),
        Command::Plot { input, top_k } => cmd_plot(&ctx, input, top_k),
        Command::Dist {
            a,
            b,
            metric,
            degree,
        } => {
            println!("{}", format_distance(cmd_dist(&a, &b, metric, degree)?));
            Ok(())
        }
        Command::Pipeline => {
            let points = match &ctx.cfg.input {
                Some(p) => p.clone(),
                None => cmd_generate(&ctx)?,
            };
            let stratified = cmd_stratify(&ctx, Some(points))?;
            cmd_diagram(&ctx, Some(stratified.clone()))?;
            cmd_persist(&ctx, Some(stratified))
        }
    }
}

/// 2 for configuration problems, 3 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<ConfigError>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<strat_core::Error>() {
            if matches!(
                e,
                strat_core::Error::InvalidParameter(_) | strat_core::Error::UnknownCatalog(_)
            ) {
                return 2;
            }
        }
    }
    3
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
