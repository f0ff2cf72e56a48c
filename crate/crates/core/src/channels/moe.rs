//! Pure-state minimization of the complementary output entropy on a finite
//! window, by projected gradient descent on the unit sphere.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use super::{tuple_window, von_neumann_entropy, ComplementaryMap};
use crate::error::Result;
use crate::groups::{Element, GroupSpec, DEFAULT_BUDGET};
use crate::{sampling, C64};

/// Eigenvalue floor inside `ln σ` for the gradient.
const LOG_FLOOR: f64 = 1e-14;
const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct MoeOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Stop when the Riemannian gradient norm drops below this.
    pub tol: f64,
    pub max_iterations: usize,
    pub budget: usize,
}

impl Default for MoeOptions {
    fn default() -> Self {
        MoeOptions {
            restarts: 32,
            seed: 0,
            tol: 1e-9,
            max_iterations: 2000,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Run record of one window.
#[derive(Clone, Debug, Serialize)]
pub struct MoeResult {
    pub group_spec: String,
    #[serde(rename = "R")]
    pub radius: usize,
    pub k: usize,
    pub restarts: usize,
    pub seed: u64,
    pub window_size: usize,
    /// Upper bound on the minimum output entropy restricted to the window (nats).
    pub best_value: f64,
    pub best_restart: usize,
    pub converged: bool,
    pub iterations: usize,
    /// `|‖v‖₂ − 1|` of the returned state.
    pub state_norm_check: f64,
    #[serde(skip)]
    pub basis: Vec<Element>,
    #[serde(skip)]
    pub state: Vec<C64>,
}

struct Objective {
    map: ComplementaryMap,
}

impl Objective {
    fn value(&self, v: &[C64]) -> f64 {
        von_neumann_entropy(&self.output(v)).unwrap_or(f64::INFINITY)
    }

    fn output(&self, v: &[C64]) -> DMatrix<C64> {
        let s = self.map.apply_pure(v);
        (s.clone() + s.adjoint()) * C64::new(0.5, 0.0)
    }

    /// Value and the complex gradient `g` with `dF = 2 Re Σ conj(g_a) dv_a`.
    fn value_and_gradient(&self, v: &[C64]) -> (f64, Vec<C64>) {
        let sigma = self.output(v);
        let eig = SymmetricEigen::new(sigma);
        let mut value = 0.0;
        let logs: Vec<f64> = eig
            .eigenvalues
            .iter()
            .map(|&a| {
                if a > 0.0 {
                    value -= a * a.ln();
                }
                -(a.max(LOG_FLOOR).ln() + 1.0)
            })
            .collect();
        let u = &eig.eigenvectors;
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            logs.len(),
            logs.iter().map(|&x| C64::new(x, 0.0)),
        ));
        let l = u * d * u.adjoint();
        (value, self.map.pullback(&l, v))
    }
}

fn dot_re(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
}

fn normalize(v: &mut [C64]) {
    let n = dot_re(v, v).sqrt();
    v.iter_mut().for_each(|z| *z /= n);
}

struct Descent {
    value: f64,
    state: Vec<C64>,
    converged: bool,
    iterations: usize,
}

/// Armijo-backtracked projected gradient descent from `v` (normalized first).
/// The value never increases along the run.
fn descend(obj: &Objective, mut v: Vec<C64>, opts: &MoeOptions) -> Descent {
    normalize(&mut v);
    let (mut f, mut g) = obj.value_and_gradient(&v);
    let mut step: f64 = 1.0;
    for it in 0..opts.max_iterations {
        let radial = dot_re(&v, &g);
        let grad: Vec<C64> = g.iter().zip(&v).map(|(gi, vi)| gi - vi * radial).collect();
        let gnorm2 = dot_re(&grad, &grad);
        if gnorm2.sqrt() < opts.tol {
            return Descent {
                value: f,
                state: v,
                converged: true,
                iterations: it,
            };
        }
        step = (step * 2.0).min(1.0e3);
        loop {
            let mut w: Vec<C64> = v.iter().zip(&grad).map(|(vi, gi)| vi - gi * step).collect();
            normalize(&mut w);
            let fw = obj.value(&w);
            if fw <= f - ARMIJO * 2.0 * step * gnorm2 {
                v = w;
                let next = obj.value_and_gradient(&v);
                f = next.0;
                g = next.1;
                break;
            }
            step /= 2.0;
            if step < MIN_STEP {
                // No decrease available at machine precision: a stationary point.
                return Descent {
                    value: f,
                    state: v,
                    converged: true,
                    iterations: it,
                };
            }
        }
    }
    Descent {
        value: f,
        state: v,
        converged: false,
        iterations: opts.max_iterations,
    }
}

fn run(
    group: &GroupSpec,
    radius: usize,
    k: usize,
    opts: &MoeOptions,
    warm: Option<(&[Element], &[C64])>,
) -> Result<MoeResult> {
    let basis = tuple_window(group, k, radius, opts.budget)?;
    let obj = Objective {
        map: ComplementaryMap::new(group, k, &basis, opts.budget)?,
    };
    let dim = basis.len();
    let e = super::ambient(group, k)?.identity();
    let mut starts: Vec<Vec<C64>> = Vec::new();
    let mut delta = vec![C64::default(); dim];
    delta[basis.iter().position(|x| *x == e).expect("window contains e")] = C64::new(1.0, 0.0);
    starts.push(delta);
    if let Some((old_basis, old_state)) = warm {
        let mut v = vec![C64::default(); dim];
        for (x, c) in old_basis.iter().zip(old_state) {
            if let Some(i) = basis.iter().position(|y| y == x) {
                v[i] = *c;
            }
        }
        if v.iter().any(|z| *z != C64::default()) {
            starts.push(v);
        }
    }
    let fixed = starts.len();
    starts.extend((0..opts.restarts.saturating_sub(1)).map(|r| {
        let mut rng = sampling::stream(opts.seed, r as u64);
        sampling::gaussian_vector(&mut rng, dim)
    }));
    let runs: Vec<Descent> = starts.into_par_iter().map(|v| descend(&obj, v, opts)).collect();
    let (best_restart, best) = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)))
        .expect("at least one start");
    let norm = dot_re(&best.state, &best.state).sqrt();
    Ok(MoeResult {
        group_spec: group.canonical(),
        radius,
        k,
        restarts: opts.restarts.max(1) + fixed - 1,
        seed: opts.seed,
        window_size: dim,
        best_value: best.value,
        best_restart,
        converged: best.converged,
        iterations: best.iterations,
        state_norm_check: (norm - 1.0).abs(),
        basis: basis.clone(),
        state: best.state.clone(),
    })
}

/// Smallest entropy of `(Φ_l^c)^{⊗k}(ξ_v)` found over unit vectors `v` on the
/// window of radius `radius`. Start 0 is `δ_e`; the others are seeded
/// Gaussians. Results are ranked by (value, start index).
pub fn minimize_output_entropy(group: &GroupSpec, radius: usize, k: usize, opts: &MoeOptions) -> Result<MoeResult> {
    run(group, radius, k, opts, None)
}

/// Runs the radii in order, warm-starting each window with the previous best
/// state. Windows are nested, so the values are nonincreasing.
pub fn moe_sweep(group: &GroupSpec, radii: &[usize], k: usize, opts: &MoeOptions) -> Result<Vec<MoeResult>> {
    let mut out: Vec<MoeResult> = Vec::new();
    for &r in radii {
        let warm = out.last().map(|p| (p.basis.as_slice(), p.state.as_slice()));
        let res = run(group, r, k, opts, warm)?;
        out.push(res);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_matches_finite_differences() {
        let g = GroupSpec::free(2);
        let basis = tuple_window(&g, 1, 2, DEFAULT_BUDGET).unwrap();
        let obj = Objective {
            map: ComplementaryMap::new(&g, 1, &basis, DEFAULT_BUDGET).unwrap(),
        };
        let mut rng = sampling::stream(9, 0);
        let v = sampling::gaussian_vector(&mut rng, basis.len());
        let dv = sampling::gaussian_vector(&mut rng, basis.len());
        let (_, grad) = obj.value_and_gradient(&v);
        let h = 1e-6;
        let plus: Vec<C64> = v.iter().zip(&dv).map(|(a, b)| a + b * h).collect();
        let minus: Vec<C64> = v.iter().zip(&dv).map(|(a, b)| a - b * h).collect();
        // Unnormalized v: the objective is still a smooth function of v.
        let fd = (obj.value(&plus) - obj.value(&minus)) / (2.0 * h);
        let analytic = 2.0 * dot_re(&grad, &dv);
        assert!(
            (fd - analytic).abs() < 1e-6 * analytic.abs().max(1.0),
            "{fd} vs {analytic}"
        );
    }

    #[test]
    fn single_point_window_gives_ln_n() {
        let g = GroupSpec::free(3);
        let r = minimize_output_entropy(&g, 0, 1, &MoeOptions::default()).unwrap();
        assert!((r.best_value - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn f2_below_ln2_and_monotone() {
        let g = GroupSpec::free(2);
        let opts = MoeOptions {
            restarts: 8,
            seed: 3,
            ..MoeOptions::default()
        };
        let sweep = moe_sweep(&g, &[1, 2, 3], 1, &opts).unwrap();
        for w in sweep.windows(2) {
            assert!(w[1].best_value <= w[0].best_value + 1e-12);
        }
        for r in &sweep {
            assert!(r.best_value <= 2f64.ln() + 1e-9 && r.best_value >= 0.0);
            assert!(r.state_norm_check < 1e-12);
        }
    }
}
