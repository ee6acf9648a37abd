//! Grid scans and Nelder-Mead polishing over chart parameters.

use std::cmp::Ordering;

use crate::measurement::AngleKind;

/// Values closer than this count as ties; the earlier grid point wins.
pub const TIE_EPS: f64 = 1e-14;

/// Knobs for a grid-plus-polish search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Grid points per rotation angle (θ axes, inclusive of both ends).
    pub theta_steps: usize,
    /// Grid points per phase angle (φ axes, end-exclusive).
    pub phi_steps: usize,
    /// Use the full `[0, 2π)` phase range even where `[0, π)` suffices.
    pub full_phase_turn: bool,
    /// Upper bound on the total number of grid points; per-axis steps are
    /// scaled down uniformly when the product would exceed it.
    pub max_grid_points: usize,
    /// Nelder-Mead iteration budget per run.
    pub refine_iters: usize,
    /// Nelder-Mead stops once every vertex is this close to the best one.
    pub simplex_tol: f64,
    /// Extra Nelder-Mead runs restarted from the previous optimum.
    pub restarts: usize,
    /// Number of best grid points used as polishing starts.
    pub starts: usize,
}

impl SearchConfig {
    /// One-sided discord: 64 x 64 over `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    pub fn delta_default() -> Self {
        Self {
            theta_steps: 64,
            phi_steps: 64,
            full_phase_turn: true,
            max_grid_points: 1 << 18,
            refine_iters: 200,
            simplex_tol: 1e-10,
            restarts: 2,
            starts: 3,
        }
    }

    /// Rotations inside degenerate eigenspaces of the marginals.
    pub fn degenerate_default() -> Self {
        Self {
            theta_steps: 64,
            phi_steps: 64,
            full_phase_turn: false,
            max_grid_points: 1 << 16,
            refine_iters: 400,
            simplex_tol: 1e-12,
            restarts: 3,
            starts: 3,
        }
    }

    /// Brute force over both projector spaces: 48 θ and 24 φ points per
    /// side, φ on `[0, π)`.
    pub fn oracle_default() -> Self {
        Self {
            theta_steps: 48,
            phi_steps: 24,
            full_phase_turn: false,
            max_grid_points: 48 * 48 * 24 * 24,
            refine_iters: 400,
            simplex_tol: 1e-10,
            restarts: 2,
            starts: 3,
        }
    }

    /// Same search with every per-axis step count replaced by `steps`.
    pub fn with_grid(mut self, steps: usize) -> Self {
        self.theta_steps = steps.max(1);
        self.phi_steps = steps.max(1);
        self
    }

    /// Grid axes for the given parameter roles.
    pub fn axes(&self, kinds: &[AngleKind]) -> Vec<Vec<f64>> {
        if kinds.is_empty() {
            return Vec::new();
        }
        let wanted: Vec<usize> = kinds.iter().map(|k| self.steps_for(*k)).collect();
        let total: f64 = wanted.iter().map(|&s| s as f64).product();
        let shrink = if total > self.max_grid_points as f64 {
            (self.max_grid_points as f64 / total).powf(1.0 / kinds.len() as f64)
        } else {
            1.0
        };
        kinds
            .iter()
            .zip(wanted)
            .map(|(kind, steps)| {
                let steps = ((steps as f64 * shrink).floor() as usize).max(2).min(steps);
                let kind = match kind {
                    AngleKind::HalfPhi if self.full_phase_turn => AngleKind::Phi,
                    k => *k,
                };
                axis(kind, steps)
            })
            .collect()
    }

    fn steps_for(&self, kind: AngleKind) -> usize {
        match kind {
            AngleKind::Theta => self.theta_steps,
            AngleKind::Phi | AngleKind::HalfPhi => self.phi_steps,
        }
    }
}

fn axis(kind: AngleKind, steps: usize) -> Vec<f64> {
    let (lo, hi, inclusive) = kind.range();
    if steps <= 1 {
        return vec![lo];
    }
    let denom = if inclusive { steps - 1 } else { steps } as f64;
    (0..steps)
        .map(|k| lo + (hi - lo) * k as f64 / denom)
        .collect()
}

/// Total number of points on a product grid.
pub fn grid_size(axes: &[Vec<f64>]) -> usize {
    axes.iter().map(Vec::len).product()
}

/// Visits every grid point in lexicographic order of axis indices.
pub fn for_each_grid_point(axes: &[Vec<f64>], mut visit: impl FnMut(&[f64])) {
    if axes.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0usize; axes.len()];
    let mut point: Vec<f64> = axes.iter().map(|a| a[0]).collect();
    loop {
        visit(&point);
        let mut k = axes.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                point[k] = axes[k][idx[k]];
                break;
            }
            idx[k] = 0;
            point[k] = axes[k][0];
        }
    }
}

/// A scored parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub value: f64,
    pub params: Vec<f64>,
}

/// Keeps the `k` lowest-valued points seen, earliest first among ties.
#[derive(Debug, Clone)]
pub struct BestK {
    k: usize,
    items: Vec<Candidate>,
}

impl BestK {
    pub fn new(k: usize) -> Self {
        Self {
            k: k.max(1),
            items: Vec::new(),
        }
    }

    /// Cheap pre-check so callers can skip allocating for hopeless points.
    #[inline]
    pub fn would_accept(&self, value: f64) -> bool {
        self.items.len() < self.k || value < self.items[self.items.len() - 1].value - TIE_EPS
    }

    pub fn offer(&mut self, value: f64, params: &[f64]) {
        if !self.would_accept(value) {
            return;
        }
        let pos = self
            .items
            .iter()
            .position(|c| value < c.value - TIE_EPS)
            .unwrap_or(self.items.len());
        self.items.insert(
            pos,
            Candidate {
                value,
                params: params.to_vec(),
            },
        );
        self.items.truncate(self.k);
    }

    /// Sorted best first.
    pub fn into_vec(self) -> Vec<Candidate> {
        self.items
    }
}

/// Lowest value wins; within [`TIE_EPS`] the lexicographically smaller
/// parameter vector wins.
pub fn candidate_order(a: &Candidate, b: &Candidate) -> Ordering {
    if (a.value - b.value).abs() > TIE_EPS {
        return a.value.total_cmp(&b.value);
    }
    for (x, y) in a.params.iter().zip(&b.params) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Scans the grid, keeping the `k` best points.
pub fn grid_best_k(
    axes: &[Vec<f64>],
    k: usize,
    mut f: impl FnMut(&[f64]) -> f64,
) -> Vec<Candidate> {
    let mut best = BestK::new(k);
    for_each_grid_point(axes, |p| {
        let v = f(p);
        best.offer(v, p);
    });
    best.into_vec()
}

/// Downhill simplex. Returns the best vertex found; never worse than `x0`.
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    max_iters: usize,
    simplex_tol: f64,
) -> Candidate {
    let dim = x0.len();
    let f0 = f(x0);
    if dim == 0 {
        return Candidate {
            value: f0,
            params: Vec::new(),
        };
    }
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), f0));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = f(&x);
        simplex.push((x, fx));
    }

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    for _ in 0..max_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if size < simplex_tol {
            break;
        }

        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let worst = simplex[dim].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(alpha);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = along(gamma);
            let fe = f(&xe);
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = along(rho * alpha);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = along(-rho);
            let fc = f(&xc);
            (xc, fc)
        };
        if fc < worst.1.min(fr) {
            simplex[dim] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for (x, fx) in simplex.iter_mut().skip(1) {
            for (xi, bi) in x.iter_mut().zip(&best) {
                *xi = bi + sigma * (*xi - bi);
            }
            *fx = f(x);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (params, value) = simplex.swap_remove(0);
    Candidate { value, params }
}

/// Nelder-Mead from each start, restarting from its optimum with a smaller
/// simplex while that keeps helping. Returns the overall best.
pub fn polish(
    mut f: impl FnMut(&[f64]) -> f64,
    starts: &[Candidate],
    step: f64,
    config: &SearchConfig,
) -> Candidate {
    let mut best: Option<Candidate> = None;
    for start in starts {
        let mut current = start.clone();
        let mut step = step;
        for _ in 0..=config.restarts {
            let next = nelder_mead(
                &mut f,
                &current.params,
                step,
                config.refine_iters,
                config.simplex_tol,
            );
            let improved = next.value < current.value - TIE_EPS;
            if next.value < current.value {
                current = next;
            }
            if !improved {
                break;
            }
            step *= 0.1;
        }
        best = match best {
            Some(b) if candidate_order(&b, &current) != Ordering::Greater => Some(b),
            _ => Some(current),
        };
    }
    best.expect("at least one start")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_layouts() {
        let theta = axis(AngleKind::Theta, 5);
        assert_eq!(theta.len(), 5);
        assert_eq!(theta[0], 0.0);
        assert!((theta[4] - std::f64::consts::PI).abs() < 1e-15);
        let phi = axis(AngleKind::Phi, 4);
        assert!((phi[1] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(phi[3] < 2.0 * std::f64::consts::PI);
    }

    #[test]
    fn budget_shrinks_axes() {
        let cfg = SearchConfig::degenerate_default();
        let kinds = [
            AngleKind::Theta,
            AngleKind::HalfPhi,
            AngleKind::Theta,
            AngleKind::HalfPhi,
        ];
        let axes = cfg.axes(&kinds);
        assert!(grid_size(&axes) <= cfg.max_grid_points);
        assert!(axes.iter().all(|a| a.len() == 16));
        let two = cfg.axes(&kinds[..2]);
        assert_eq!(grid_size(&two), 64 * 64);
    }

    #[test]
    fn grid_visits_in_lexicographic_order() {
        let axes = vec![vec![0.0, 1.0], vec![10.0, 20.0, 30.0]];
        let mut seen = Vec::new();
        for_each_grid_point(&axes, |p| seen.push(p.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0.0, 10.0]);
        assert_eq!(seen[1], vec![0.0, 20.0]);
        assert_eq!(seen[3], vec![1.0, 10.0]);
    }

    #[test]
    fn ties_keep_the_first_point() {
        let axes = vec![vec![0.0, 1.0, 2.0]];
        let best = grid_best_k(&axes, 2, |_| 1.0);
        assert_eq!(best[0].params, vec![0.0]);
        assert_eq!(best[1].params, vec![1.0]);
    }

    #[test]
    fn nelder_mead_finds_rosenbrock_minimum() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = nelder_mead(rosen, &[-1.2, 1.0], 0.5, 5000, 1e-12);
        assert!((out.params[0] - 1.0).abs() < 1e-6, "{out:?}");
        assert!(out.value < 1e-12);
    }

    #[test]
    fn nelder_mead_never_worsens_start() {
        let f = |x: &[f64]| x[0].abs() + x[1].abs();
        let out = nelder_mead(f, &[0.0, 0.0], 1.0, 10, 1e-10);
        assert_eq!(out.value, 0.0);
    }

    #[test]
    fn polish_improves_grid_point() {
        let f = |x: &[f64]| (x[0] - 0.123).powi(2) + (x[1] + 0.456).powi(2);
        let axes = vec![vec![-1.0, 0.0, 1.0], vec![-1.0, 0.0, 1.0]];
        let starts = grid_best_k(&axes, 2, f);
        let out = polish(f, &starts, 0.5, &SearchConfig::delta_default());
        assert!(out.value < 1e-18);
    }
}
