use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{ProblemSpec, NONSMOOTH_RADIUS};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::numeric::{axpy, dot, norm};
use crate::objective::{KnownConstants, Objective, Optimum, Oracle};

/// Vertex enumeration is used while the number of candidate active sets stays below this.
const MAX_VERTEX_CANDIDATES: u128 = 200_000;
const SUBGRADIENT_REFERENCE_STEPS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonsmoothKind {
    AbsSum,
    MaxAffine,
}

/// `f(x) = |x - c|_1`
#[derive(Clone, Debug)]
struct AbsSum {
    c: Vec<f64>,
}

impl Oracle for AbsSum {
    fn dim(&self) -> usize {
        self.c.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.c).map(|(xi, ci)| (xi - ci).abs()).sum()
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        for ((o, xi), ci) in out.iter_mut().zip(x).zip(&self.c) {
            *o = if xi > ci {
                1.0
            } else if xi < ci {
                -1.0
            } else {
                0.0
            };
        }
    }
}

/// `f(x) = max_i (a_i^T x + b_i)`
#[derive(Clone, Debug)]
struct MaxAffine {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl MaxAffine {
    fn pieces(&self, x: &[f64]) -> impl Iterator<Item = f64> + '_ {
        let x = x.to_vec();
        self.a.iter().zip(&self.b).map(move |(ai, bi)| dot(ai, &x) + bi)
    }
}

impl Oracle for MaxAffine {
    fn dim(&self) -> usize {
        self.a[0].len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.pieces(x).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Minimum-norm element of the convex hull of the active gradients;
    /// zero exactly when zero is a subgradient.
    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let vals: Vec<f64> = self.pieces(x).collect();
        let top = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let active: Vec<&[f64]> = vals
            .iter()
            .zip(&self.a)
            .filter(|(v, _)| **v == top)
            .map(|(_, a)| a.as_slice())
            .collect();
        if active.len() == 1 {
            out.copy_from_slice(active[0]);
            return;
        }
        let point = min_norm_in_hull(&active);
        let scale = active.iter().map(|a| norm(a)).fold(0.0, f64::max);
        if norm(&point) <= 1e-12 * scale {
            out.fill(0.0);
        } else {
            out.copy_from_slice(&point);
        }
    }
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(w: &mut [f64]) {
    let mut u = w.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    for wi in w.iter_mut() {
        *wi = (*wi - theta).max(0.0);
    }
}

/// Minimum-norm point of `conv(points)` by projected gradient on the simplex weights.
fn min_norm_in_hull(points: &[&[f64]]) -> Vec<f64> {
    let k = points.len();
    let d = points[0].len();
    let gram: Vec<Vec<f64>> = points
        .iter()
        .map(|p| points.iter().map(|q| dot(p, q)).collect())
        .collect();
    let trace: f64 = (0..k).map(|i| gram[i][i]).sum();
    let step = 1.0 / trace.max(f64::MIN_POSITIVE);
    let mut w = vec![1.0 / k as f64; k];
    for _ in 0..10_000 {
        let grad: Vec<f64> = gram.iter().map(|row| dot(row, &w)).collect();
        let prev = w.clone();
        axpy(-step, &grad, &mut w);
        project_simplex(&mut w);
        if w.iter().zip(&prev).all(|(a, b)| (a - b).abs() <= 1e-16) {
            break;
        }
    }
    let mut point = vec![0.0; d];
    for (wi, p) in w.iter().zip(points) {
        axpy(*wi, p, &mut point);
    }
    point
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Advances `idx` to the next `k`-combination of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Whether zero is a convex combination of the `d + 1` slopes in `idx`,
/// from the barycentric system `sum_i w_i a_i = 0`, `sum_i w_i = 1`.
fn zero_in_simplex_hull(f: &MaxAffine, idx: &[usize]) -> bool {
    let d = f.dim();
    let mut sys = DMatrix::zeros(d + 1, d + 1);
    for (c, &i) in idx.iter().enumerate() {
        for r in 0..d {
            sys[(r, c)] = f.a[i][r];
        }
        sys[(d, c)] = 1.0;
    }
    let mut rhs = DVector::zeros(d + 1);
    rhs[d] = 1.0;
    sys.lu()
        .solve(&rhs)
        .is_some_and(|w| w.iter().all(|wi| wi.is_finite() && *wi >= -1e-12))
}

/// Exact minimizer by enumerating every vertex of the epigraph: each set of
/// `d + 1` pieces with an invertible system `a_i^T x - t = -b_i` gives a
/// candidate, kept if no other piece lies above it.
fn minimize_by_vertices(f: &MaxAffine) -> Option<(Vec<f64>, f64)> {
    let d = f.dim();
    let m = f.a.len();
    if m < d + 1 {
        return None;
    }
    let mut idx: Vec<usize> = (0..=d).collect();
    let mut best: Option<(Vec<f64>, f64, Vec<usize>)> = None;
    loop {
        let mut sys = DMatrix::zeros(d + 1, d + 1);
        let mut rhs = DVector::zeros(d + 1);
        for (r, &i) in idx.iter().enumerate() {
            for c in 0..d {
                sys[(r, c)] = f.a[i][c];
            }
            sys[(r, d)] = -1.0;
            rhs[r] = -f.b[i];
        }
        if let Some(sol) = sys.lu().solve(&rhs) {
            if sol.iter().all(|v| v.is_finite()) {
                let x: Vec<f64> = sol.iter().take(d).copied().collect();
                let t = sol[d];
                let slack = 1e-10 * (1.0 + t.abs());
                if f.pieces(&x).all(|v| v <= t + slack) && best.as_ref().is_none_or(|(_, bt, _)| t < *bt) {
                    best = Some((x, t, idx.clone()));
                }
            }
        }
        if !next_combination(&mut idx, m) {
            break;
        }
    }
    let (x, t, idx) = best?;
    // The lowest vertex minimizes f only if zero is a subgradient there.
    if zero_in_simplex_hull(f, &idx) {
        return Some((x, t));
    }
    let slack = 1e-10 * (1.0 + t.abs());
    let active: Vec<&[f64]> = f
        .pieces(&x)
        .zip(&f.a)
        .filter(|(v, _)| *v >= t - slack)
        .map(|(_, a)| a.as_slice())
        .collect();
    let scale = active.iter().map(|a| norm(a)).fold(0.0, f64::max);
    (norm(&min_norm_in_hull(&active)) <= 1e-9 * scale).then_some((x, t))
}

/// Averaged subgradient method from the origin, for instances too large to enumerate.
fn minimize_by_subgradient(f: &MaxAffine, g_max: f64) -> (Vec<f64>, f64) {
    let d = f.dim();
    let eta = NONSMOOTH_RADIUS / (g_max * (SUBGRADIENT_REFERENCE_STEPS as f64).sqrt());
    let mut x = vec![0.0; d];
    let mut g = vec![0.0; d];
    let mut sum = vec![0.0; d];
    for _ in 0..SUBGRADIENT_REFERENCE_STEPS {
        axpy(1.0, &x, &mut sum);
        f.gradient(&x, &mut g);
        axpy(-eta, &g, &mut x);
    }
    let avg: Vec<f64> = sum.iter().map(|s| s / SUBGRADIENT_REFERENCE_STEPS as f64).collect();
    let value = f.value(&avg);
    (avg, value)
}

fn ball_problem(id: &str, seed: u64, objective: Objective, rng: &mut ChaCha8Rng, notes: String) -> Result<ProblemSpec> {
    let x_star = objective.x_star().expect("nonsmooth problems know x*").to_vec();
    let d = x_star.len();
    let mut dir: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    let n = norm(&dir);
    dir.iter_mut().for_each(|v| *v *= NONSMOOTH_RADIUS / (2.0 * n));
    let initial_point = x_star.iter().zip(&dir).map(|(a, b)| a + b).collect();
    Ok(ProblemSpec {
        id: id.into(),
        seed,
        objective,
        domain: Domain::ball(x_star, NONSMOOTH_RADIUS)?,
        initial_point,
        notes,
    })
}

/// `|x - c|_1` on the ball of radius 10 around `c`, starting halfway to the boundary.
pub fn abs_sum_from_center(c: Vec<f64>) -> Result<ProblemSpec> {
    build_abs_sum(c, 0, &mut ChaCha8Rng::seed_from_u64(0))
}

fn build_abs_sum(c: Vec<f64>, seed: u64, rng: &mut ChaCha8Rng) -> Result<ProblemSpec> {
    if c.is_empty() {
        return Err(Error::Config("abs_sum requires d >= 1".into()));
    }
    let g = (c.len() as f64).sqrt();
    let known = KnownConstants {
        optimum: Some(Optimum {
            point: c.clone(),
            value: 0.0,
        }),
        smoothness: None,
        lipschitz: Some(g),
    };
    let objective = Objective::new(AbsSum { c }, known);
    ball_problem(
        "abs_sum",
        seed,
        objective,
        rng,
        format!("nonsmooth, G = sqrt(d) = {g}; ball of radius {NONSMOOTH_RADIUS} around x*"),
    )
}

/// `max_i (a_i^T x + b_i)` from explicit pieces; fails when no minimizer exists.
pub fn max_affine_from_pieces(a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<ProblemSpec> {
    build_max_affine(a, b, 0, &mut ChaCha8Rng::seed_from_u64(0))
}

fn build_max_affine(a: Vec<Vec<f64>>, b: Vec<f64>, seed: u64, rng: &mut ChaCha8Rng) -> Result<ProblemSpec> {
    let d = a.first().map_or(0, Vec::len);
    if d == 0 || a.len() != b.len() || a.iter().any(|ai| ai.len() != d) {
        return Err(Error::Config("max_affine needs nonempty pieces of equal dimension".into()));
    }
    let f = MaxAffine { a, b };
    let g = f.a.iter().map(|ai| norm(ai)).fold(0.0, f64::max);
    let (x_star, how) = if binomial(f.a.len(), d + 1) <= MAX_VERTEX_CANDIDATES {
        let (x, _) = minimize_by_vertices(&f).ok_or_else(|| {
            Error::Generation("max-affine function has no minimizer (unbounded below)".into())
        })?;
        (x, "vertex enumeration")
    } else {
        (minimize_by_subgradient(&f, g).0, "averaged subgradient reference solve")
    };
    let f_star = f.value(&x_star);
    let known = KnownConstants {
        optimum: Some(Optimum {
            point: x_star,
            value: f_star,
        }),
        smoothness: None,
        lipschitz: Some(g),
    };
    let objective = Objective::new(f, known);
    ball_problem(
        "max_affine",
        seed,
        objective,
        rng,
        format!("nonsmooth, G = max |a_i| = {g}; x* by {how}; ball of radius {NONSMOOTH_RADIUS} around x*"),
    )
}

/// Seeded nonsmooth Lipschitz instance.
///
/// `abs_sum` draws `c ~ N(0, I)`. `max_affine` draws `d` Gaussian slopes and
/// pairs each with a negatively rescaled copy, which makes the function
/// coercive, so `m = 2d` pieces always have a minimizer.
pub fn make_nonsmooth_lipschitz(kind: NonsmoothKind, d: usize, seed: u64) -> Result<ProblemSpec> {
    if d == 0 {
        return Err(Error::Config("nonsmooth problems require d >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        NonsmoothKind::AbsSum => {
            let c = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            build_abs_sum(c, seed, &mut rng)
        }
        NonsmoothKind::MaxAffine => {
            let (a, b) = coercive_pieces(d, &mut rng);
            build_max_affine(a, b, seed, &mut rng)
        }
    }
}

fn coercive_pieces(d: usize, rng: &mut ChaCha8Rng) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut a: Vec<Vec<f64>> = (0..d)
        .map(|_| (0..d).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    for i in 0..d {
        let c: f64 = rng.random_range(0.5..2.0);
        let neg = a[i].iter().map(|v| -c * v).collect();
        a.push(neg);
    }
    let b = (0..2 * d).map(|_| rng.sample(StandardNormal)).collect();
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abs_sum_values_and_subgradients() {
        let p = abs_sum_from_center(vec![0.0, 0.0]).unwrap();
        assert_eq!(p.objective.value(&[1.0, -2.0]), 3.0);
        assert_eq!(p.objective.gradient(&[1.0, -2.0]), vec![1.0, -1.0]);
        assert_eq!(p.objective.value(&[0.0, 0.0]), 0.0);
        assert_eq!(p.objective.gradient(&[0.0, 0.0]), vec![0.0, 0.0]);
        assert_eq!(p.objective.lipschitz(), Some(2f64.sqrt()));
    }

    #[test]
    fn max_affine_of_x_and_minus_x_is_abs() {
        let p = max_affine_from_pieces(vec![vec![1.0], vec![-1.0]], vec![0.0, 0.0]).unwrap();
        for x in [-2.0, -0.5, 0.0, 0.25, 3.0] {
            assert_eq!(p.objective.value(&[x]), f64::abs(x));
        }
        assert_eq!(p.objective.lipschitz(), Some(1.0));
        assert_eq!(p.objective.x_star(), Some(&[0.0][..]));
        assert_eq!(p.objective.f_star(), Some(0.0));
        assert_eq!(p.objective.gradient(&[0.0]), vec![0.0]);
        assert_eq!(p.objective.gradient(&[0.1]), vec![1.0]);
    }

    #[test]
    fn tie_without_zero_subgradient_returns_min_norm_element() {
        // max(x + y, x - y): at y = 0 both are active, hull of (1,1),(1,-1) has min-norm point (1,0).
        let f = MaxAffine {
            a: vec![vec![1.0, 1.0], vec![1.0, -1.0]],
            b: vec![0.0, 0.0],
        };
        let mut g = [0.0; 2];
        f.gradient(&[0.3, 0.0], &mut g);
        assert!((g[0] - 1.0).abs() < 1e-12 && g[1].abs() < 1e-12);
    }

    #[test]
    fn unbounded_pieces_are_rejected() {
        assert!(max_affine_from_pieces(vec![vec![1.0], vec![2.0]], vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn vertex_minimizer_beats_random_points() {
        let p = make_nonsmooth_lipschitz(NonsmoothKind::MaxAffine, 3, 5).unwrap();
        let f_star = p.objective.f_star().unwrap();
        let xs = p.objective.x_star().unwrap().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let x: Vec<f64> = xs.iter().map(|v| v + rng.random_range(-3.0..3.0)).collect();
            assert!(p.objective.value(&x) >= f_star - 1e-12);
        }
    }

    #[test]
    fn subgradient_reference_is_close_to_vertex_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (a, b) = coercive_pieces(2, &mut rng);
        let f = MaxAffine { a, b };
        let (_, exact) = minimize_by_vertices(&f).unwrap();
        let g = f.a.iter().map(|ai| norm(ai)).fold(0.0, f64::max);
        let (_, approx) = minimize_by_subgradient(&f, g);
        assert!(approx >= exact - 1e-12);
        assert!(approx - exact < 1e-2, "{approx} vs {exact}");
    }

    #[test]
    fn coercive_instances_always_have_a_certified_minimizer() {
        for d in 1..=5 {
            for seed in 0..20 {
                let p = make_nonsmooth_lipschitz(NonsmoothKind::MaxAffine, d, seed).unwrap();
                assert!(p.domain.contains(&p.initial_point, 1e-12));
            }
        }
    }

    #[test]
    fn simplex_projection() {
        let mut w = [0.5, 0.5];
        project_simplex(&mut w);
        assert_eq!(w, [0.5, 0.5]);
        let mut w = [2.0, 0.0];
        project_simplex(&mut w);
        assert_eq!(w, [1.0, 0.0]);
    }

    #[test]
    fn combinations_enumerate_all_subsets() {
        let mut idx = vec![0, 1];
        let mut count = 1;
        while next_combination(&mut idx, 5) {
            count += 1;
        }
        assert_eq!(count, binomial(5, 2));
        assert_eq!(binomial(10, 6), 210);
    }
}
