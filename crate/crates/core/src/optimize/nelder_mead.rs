//! Box-constrained Nelder–Mead. Trial points are projected onto the box, so
//! the objective is only ever evaluated inside it.

#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    /// Stop once the simplex values spread by at most this much...
    pub f_tol: f64,
    /// ...and its vertices differ from the best one by at most this much in
    /// every coordinate.
    pub x_tol: f64,
    pub max_evals: usize,
    /// Edge length of the initial simplex along each coordinate.
    pub initial_step: Vec<f64>,
    /// Fresh-simplex restarts from the best point after convergence.
    pub max_restarts: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn project(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for ((xi, lo), hi) in x.iter_mut().zip(lower).zip(upper) {
        *xi = xi.clamp(*lo, *hi);
    }
}

/// Minimizes `f` over the box `[lower, upper]` starting from `x0`.
/// Non-finite objective values are treated as `+∞`.
pub fn minimize<F>(mut f: F, x0: &[f64], lower: &[f64], upper: &[f64], opts: &NelderMeadOptions) -> NelderMeadOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let y = f(x);
        if y.is_nan() { f64::INFINITY } else { y }
    };

    let mut start = x0.to_vec();
    project(&mut start, lower, upper);
    let mut best_x = start.clone();
    let mut best_f = eval(&best_x, &mut evals);
    let mut converged = false;

    for restart in 0..=opts.max_restarts {
        let run = run_simplex(&mut eval, &best_x, lower, upper, opts, &mut evals);
        let improvement = best_f - run.f;
        if run.f <= best_f {
            best_x = run.x;
            best_f = run.f;
        }
        converged = run.converged;
        if !converged || evals >= opts.max_evals {
            break;
        }
        // A restart that does not move the value means the first run was
        // not a false convergence on a collapsed simplex.
        if restart > 0 && improvement <= opts.f_tol {
            break;
        }
    }

    NelderMeadOutcome { x: best_x, f: best_f, evals, converged }
}

struct Run {
    x: Vec<f64>,
    f: f64,
    converged: bool,
}

fn run_simplex<E>(eval: &mut E, x0: &[f64], lower: &[f64], upper: &[f64], opts: &NelderMeadOptions, evals: &mut usize) -> Run
where
    E: FnMut(&[f64], &mut usize) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        let step = opts.initial_step[i];
        v[i] = if v[i] + step <= upper[i] { v[i] + step } else { v[i] - step };
        project(&mut v, lower, upper);
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, evals)).collect();

    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    loop {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (best, worst, second) = (order[0], order[n], order[n - 1]);

        let f_spread = values[worst] - values[best];
        let x_spread = simplex
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[best]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if f_spread <= opts.f_tol && x_spread <= opts.x_tol {
            return Run { x: simplex[best].clone(), f: values[best], converged: true };
        }
        if *evals >= opts.max_evals {
            return Run { x: simplex[best].clone(), f: values[best], converged: false };
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &i in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                *c += x / n as f64;
            }
        }

        for k in 0..n {
            trial[k] = centroid[k] + REFLECT * (centroid[k] - simplex[worst][k]);
        }
        project(&mut trial, lower, upper);
        let f_reflect = eval(&trial, evals);

        if f_reflect < values[best] {
            for k in 0..n {
                trial2[k] = centroid[k] + EXPAND * (trial[k] - centroid[k]);
            }
            project(&mut trial2, lower, upper);
            let f_expand = eval(&trial2, evals);
            if f_expand < f_reflect {
                simplex[worst].copy_from_slice(&trial2);
                values[worst] = f_expand;
            } else {
                simplex[worst].copy_from_slice(&trial);
                values[worst] = f_reflect;
            }
            continue;
        }
        if f_reflect < values[second] {
            simplex[worst].copy_from_slice(&trial);
            values[worst] = f_reflect;
            continue;
        }

        // Outside contraction if the reflection beat the worst point, inside otherwise.
        let outside = f_reflect < values[worst];
        for k in 0..n {
            trial2[k] = if outside {
                centroid[k] + CONTRACT * (trial[k] - centroid[k])
            } else {
                centroid[k] + CONTRACT * (simplex[worst][k] - centroid[k])
            };
        }
        project(&mut trial2, lower, upper);
        let f_contract = eval(&trial2, evals);
        let threshold = if outside { f_reflect } else { values[worst] };
        if f_contract < threshold {
            simplex[worst].copy_from_slice(&trial2);
            values[worst] = f_contract;
            continue;
        }

        let anchor = simplex[best].clone();
        for &i in &order[1..] {
            for (x, a) in simplex[i].iter_mut().zip(&anchor) {
                *x = a + SHRINK * (*x - a);
            }
            values[i] = eval(&simplex[i], evals);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(n: usize) -> NelderMeadOptions {
        NelderMeadOptions {
            f_tol: 1e-14,
            x_tol: 1e-10,
            max_evals: 20_000,
            initial_step: vec![0.2; n],
            max_restarts: 3,
        }
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = minimize(f, &[-1.2, 1.0], &[-5.0, -5.0], &[5.0, 5.0], &opts(2));
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-6 && (out.x[1] - 1.0).abs() < 1e-6, "{:?}", out.x);
    }

    #[test]
    fn active_bound() {
        // Unconstrained minimum at (−1, 2); the box cuts x at 0.
        let f = |x: &[f64]| (x[0] + 1.0).powi(2) + (x[1] - 2.0).powi(2);
        let out = minimize(f, &[0.5, 0.5], &[0.0, 0.0], &[3.0, 3.0], &opts(2));
        assert!(out.x[0].abs() < 1e-9 && (out.x[1] - 2.0).abs() < 1e-6, "{:?}", out.x);
        assert!((out.f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let mut o = opts(2);
        o.max_evals = 30;
        let out = minimize(f, &[-1.2, 1.0], &[-5.0, -5.0], &[5.0, 5.0], &o);
        assert!(!out.converged);
        assert!(out.evals <= 30 + 3);
    }

    #[test]
    fn infinite_values_are_avoided() {
        let f = |x: &[f64]| if x[0] < 0.1 { f64::NAN } else { (x[0] - 0.5).powi(2) };
        let out = minimize(f, &[1.0], &[0.0], &[2.0], &opts(1));
        assert!((out.x[0] - 0.5).abs() < 1e-6);
    }
}
