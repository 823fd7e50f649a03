//! Derivative-free minimization (Nelder–Mead simplex search).

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    pub max_iter: usize,
    /// Stop once the spread of objective values over the simplex drops
    /// below this.
    pub tol: f64,
    /// Edge length of the initial simplex.
    pub step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_iter: 200,
            tol: 1e-6,
            step: 0.25,
        }
    }
}

impl NelderMead {
    /// Returns the best point found and its value.
    pub fn minimize(&self, f: impl Fn(&[f64]) -> f64, x0: &[f64]) -> (Vec<f64>, f64) {
        let n = x0.len();
        if n == 0 {
            return (Vec::new(), f(x0));
        }
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((x0.to_vec(), f(x0)));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += self.step;
            let fx = f(&x);
            simplex.push((x, fx));
        }
        let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
        };

        for _ in 0..self.max_iter {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[n].1 - simplex[0].1 <= self.tol {
                break;
            }
            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, v) in centroid.iter_mut().zip(x) {
                    *c += v / n as f64;
                }
            }
            let worst = simplex[n].clone();
            let reflected = lerp(&centroid, &worst.0, -1.0);
            let fr = f(&reflected);
            if fr < simplex[0].1 {
                let expanded = lerp(&centroid, &worst.0, -2.0);
                let fe = f(&expanded);
                simplex[n] = if fe < fr {
                    (expanded, fe)
                } else {
                    (reflected, fr)
                };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (reflected, fr);
            } else {
                let (towards, ft) = if fr < worst.1 {
                    (&reflected, fr)
                } else {
                    (&worst.0, worst.1)
                };
                let contracted = lerp(&centroid, towards, 0.5);
                let fc = f(&contracted);
                if fc < ft {
                    simplex[n] = (contracted, fc);
                } else {
                    let best = simplex[0].0.clone();
                    for entry in simplex.iter_mut().skip(1) {
                        let x = lerp(&best, &entry.0, 0.5);
                        let fx = f(&x);
                        *entry = (x, fx);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        simplex.swap_remove(0)
    }
}
