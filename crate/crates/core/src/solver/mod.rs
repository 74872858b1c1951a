//! Predictor-corrector infeasible primal-dual interior point loop over
//! truncated Euclidean arithmetic.
//!
//! One pass of [`solve`]:
//!
//! ```text
//! residuals → centrality μ → convergence measures ρ₁ ρ₂ ρ₃ → check
//!   → predictor Newton solve → keep leading monosemia → step lengths
//!   → adaptive centering σ → corrector Newton solve → combined direction
//!   → keep leading monosemia → step lengths → update (x, λ, s)
//!   → re-center close-to-zero entries one magnitude below μ
//! ```
//!
//! Infeasibility and unboundedness of the source problem are read off the
//! converged solution of the embedded problem by [`classify_result`]; no
//! divergence polling is needed.
//!
//! A solve mutates only its own state; concurrent solves share nothing.

use std::error::Error;
use std::fmt;

use crate::ban::Ban;
use crate::linalg::{BanMatrix, BanVector, LinalgError};
use crate::model::{EmbeddedNaqp, Naqp};

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Per-monosemium convergence tolerance ε.
    pub eps: f64,
    pub max_it: usize,
    /// Fraction of the boundary step actually taken.
    pub step_damping: f64,
    /// Scales the re-centering target μ′ = coefficient · lead_mon(μ) · η.
    pub recenter_coefficient: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { eps: 1e-8, max_it: 50, step_damping: 0.99, recenter_coefficient: 1.0 }
    }
}

impl SolverConfig {
    fn validate(&self) {
        assert!(self.eps > 0.0 && self.eps < 1.0, "tolerance must lie in (0, 1)");
        assert!(self.max_it >= 1, "need at least one iteration");
        assert!(
            self.step_damping > 0.0 && self.step_damping < 1.0,
            "step damping must lie in (0, 1)"
        );
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    OriginalInfeasible,
    OriginalUnbounded,
    IterationLimit,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::OriginalInfeasible => "original problem infeasible",
            SolveStatus::OriginalUnbounded => "original problem unbounded",
            SolveStatus::IterationLimit => "iteration limit reached",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug)]
pub enum SolverError {
    /// The least-squares system AAᵀ of the starting point is rank deficient.
    RankDeficient { step: usize },
    /// The Newton block matrix went singular.
    NewtonSingular { iteration: usize, step: usize },
    /// Starting point failed to reach the strict interior.
    NotInterior,
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::RankDeficient { step } => {
                write!(f, "constraint matrix is rank deficient (pivot step {step})")
            }
            SolverError::NewtonSingular { iteration, step } => write!(
                f,
                "Newton system singular at iteration {iteration} (elimination step {step})"
            ),
            SolverError::NotInterior => {
                write!(f, "starting point is not strictly interior")
            }
        }
    }
}

impl Error for SolverError {}

/// Primal-dual triple with residuals and convergence measures for one pass.
#[derive(Debug, Clone)]
pub struct IterateState {
    pub x: BanVector,
    pub lambda: BanVector,
    pub s: BanVector,
    pub r_b: BanVector,
    pub r_c: BanVector,
    pub r_mu: BanVector,
    pub mu: Ban,
    pub rho: (Ban, Ban, Ban),
}

/// One trace row: the iterate before the pass steps.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub iter: usize,
    pub mu: Ban,
    pub x_original: BanVector,
    pub objective: Ban,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Final point in embedded coordinates.
    pub x: BanVector,
    pub lambda: BanVector,
    pub s: BanVector,
    /// Final point restricted to the original variables.
    pub x_original: BanVector,
    /// Duals of the source rows, reported in the input orientation.
    pub lambda_original: BanVector,
    /// Scalarized objective at `x_original` (minimization sign).
    pub objective: Ban,
    /// Objective coefficients per priority level (α⁰, η, η², …).
    pub objective_levels: Vec<f64>,
    pub trace: Vec<IterationRecord>,
    pub iterations: usize,
}

/// Least-squares starting point with positivity and centering shifts; every
/// entry is reduced to its leading monosemium before the loop starts.
pub fn starting_point(
    a: &BanMatrix,
    b: &BanVector,
    c: &BanVector,
    q: &BanMatrix,
) -> Result<(BanVector, BanVector, BanVector), SolverError> {
    let len = a.ban_len();
    let at = a.transpose();
    let aat = a.mat_mul(&at);
    let solve = |rhs: &BanVector| {
        aat.lu_solve(rhs).map_err(|e| match e {
            LinalgError::Singular { step } => SolverError::RankDeficient { step },
            LinalgError::DimensionMismatch { .. } => unreachable!("shapes fixed here"),
        })
    };

    let mut x = at.mat_vec(&solve(b)?);
    let cqx = c.add(&q.mat_vec(&x));
    let lambda = solve(&a.mat_vec(&cqx))?;
    let mut s = cqx.sub(&at.mat_vec(&lambda));

    let shift = |v: &BanVector| {
        let d = v.min().scale(-1.5);
        if d.is_positive() {
            v.map(|e| e + &d)
        } else {
            v.clone()
        }
    };
    x = shift(&x);
    s = shift(&s);

    let xs = x.dot(&s);
    if xs.is_zero() {
        // degenerate least-squares corner: one side sits exactly on the
        // boundary while the other is interior
        let bump = Ban::real(0.5, len);
        if !x.min().is_positive() {
            x = x.map(|e| e + &bump);
        }
        if !s.min().is_positive() {
            s = s.map(|e| e + &bump);
        }
    } else {
        let dx = xs.scale(0.5).checked_div(&s.sum()).expect("s sums positive");
        let ds = xs.scale(0.5).checked_div(&x.sum()).expect("x sums positive");
        x = x.map(|e| e + &dx);
        s = s.map(|e| e + &ds);
    }

    let x = x.lead_mon();
    let lambda = lambda.lead_mon();
    let s = s.lead_mon();
    if !x.is_strictly_positive() || !s.is_strictly_positive() {
        return Err(SolverError::NotInterior);
    }
    Ok((x, lambda, s))
}

/// Fills `r_b = Ax − b`, `r_c = Aᵀλ + s − Qx − c`, `r_μ = x ⊙ s` and
/// `μ = r_μᵀ𝟙 / n`.
pub fn residuals_and_mu(
    a: &BanMatrix,
    b: &BanVector,
    c: &BanVector,
    q: &BanMatrix,
    x: &BanVector,
    lambda: &BanVector,
    s: &BanVector,
) -> (BanVector, BanVector, BanVector, Ban) {
    // Residuals are sums of near-cancelling terms across magnitude levels;
    // leftover leading dust (converged levels decaying geometrically) must
    // not outrank honest content below it.
    let r_b = a.mat_vec(x).sub(b).denoised();
    let r_c = a.transpose().mat_vec(lambda).add(s).sub(&q.mat_vec(x)).sub(c).denoised();
    let r_mu = x.hadamard(s);
    let mu = r_mu.sum().scale(1.0 / x.dim() as f64).denoised();
    (r_b, r_c, r_mu, mu)
}

fn magnitude_or_one(v: &BanVector) -> Ban {
    v.magnitude().unwrap_or_else(|_| Ban::real(1.0, v.ban_len()))
}

/// Zeroes direction entries whose leading coefficient is elimination dust
/// relative to the direction's own dominant coefficient; a dust component
/// on a small variable would otherwise bind the ratio test with an
/// infinitesimal step of absurd coefficient.
fn denoise_direction(v: &BanVector) -> BanVector {
    let max_coeff = v.iter().fold(0.0f64, |m, e| m.max(e.leading_coeff().abs()));
    if max_coeff == 0.0 {
        return v.clone();
    }
    let thresh = max_coeff * 1e-15;
    v.map(|e| {
        if !e.is_zero() && e.leading_coeff().abs() < thresh {
            Ban::zero(e.len())
        } else {
            e.clone()
        }
    })
}

/// Restricts each direction entry to the monosemia it can meaningfully
/// carry this pass — nothing above its variable's own leading power (an
/// above-power negative component would bind the ratio test with an
/// infinitesimal step whose coefficient poisons every other entry) and
/// nothing below one level under the live one (deeper content is noise
/// here and is recomputed once its level goes live) — then reduces it to
/// its numerically dominant monosemium.
fn shape_direction(d: &BanVector, v: &BanVector, live: i64, ray: &[bool]) -> BanVector {
    let lo = live.saturating_sub(1);
    // a correction whose coefficient dwarfs every quantity in the iterate is
    // an amplified null-space component of a level-degenerate system
    let trust = 1e9
        * (1.0
            + v.iter()
                .flat_map(|e| e.coeffs().iter())
                .fold(0.0f64, |m, c| m.max(c.abs())));
    BanVector::new(
        d.iter()
            .zip(v.iter())
            .enumerate()
            .map(|(idx, (di, vi))| {
                if di.is_zero() {
                    return di.clone();
                }
                let hi = vi.power().min(di.power());
                if hi < lo {
                    return Ban::zero(di.len());
                }
                let len = di.len();
                let mut coeffs: Vec<f64> = (0..len)
                    .map(|i| {
                        let p = hi - i as i64;
                        if p < lo {
                            return 0.0;
                        }
                        let c = di.coeff_at_power(p);
                        if c.abs() > trust {
                            0.0
                        } else {
                            c
                        }
                    })
                    .collect();
                // a leading term above the live level that is far smaller
                // than the entry's dominant coefficient is residue of an
                // already-satisfied level; it yields the lead to the level
                // that still has work
                // split-pair columns share a degenerate ray whose level can
                // sit above the work the entry actually needs to do; their
                // movement follows the numerically dominant monosemium
                let reduced = Ban::new(hi, coeffs);
                if ray.get(idx).copied().unwrap_or(false) {
                    reduced.dominant_mon()
                } else {
                    reduced.lead_mon()
                }
            })
            .collect(),
    )
}

/// Drops every monosemium with power above `p_max` from each entry.
fn mask_levels(v: &BanVector, p_max: i64) -> BanVector {
    v.map(|e| {
        if e.is_zero() || e.power() <= p_max {
            return e.clone();
        }
        let len = e.len();
        let coeffs = (0..len).map(|i| e.coeff_at_power(p_max - i as i64)).collect();
        Ban::new(p_max, coeffs)
    })
}

/// KKT satisfaction measures with magnitude-normalized denominators and the
/// convention `O(0) = 1`:
/// `ρ₁ = ‖Ax−b‖/(1·O(b)+‖b‖)`, `ρ₂ = ‖Aᵀλ+s−Qx−c‖/(1·O(c)+‖c‖)`,
/// `ρ₃ = μ/(1·O(g)+|g|)` with `g = ½xᵀQx + cᵀx`.
pub fn convergence_measures(
    b: &BanVector,
    c: &BanVector,
    q: &BanMatrix,
    x: &BanVector,
    r_b: &BanVector,
    r_c: &BanVector,
    mu: &Ban,
) -> (Ban, Ban, Ban) {
    let len = b.ban_len();
    let rho1 = r_b
        .euclidean_norm()
        .checked_div(&(magnitude_or_one(b) + b.euclidean_norm()))
        .expect("denominator at least 1");
    let rho2 = r_c
        .euclidean_norm()
        .checked_div(&(magnitude_or_one(c) + c.euclidean_norm()))
        .expect("denominator at least 1");
    let g = x.dot(&q.mat_vec(x)).scale(0.5) + c.dot(x);
    let g_mag = if g.is_zero() { Ban::real(1.0, len) } else { g.magnitude().expect("nonzero") };
    let rho3 = mu.checked_div(&(g_mag + g.abs())).expect("denominator at least 1");
    (rho1, rho2, rho3)
}

/// Euclidean norm of the coefficients a vector carries at one power.
fn level_norm(v: &BanVector, p: i64) -> f64 {
    v.iter().map(|e| e.coeff_at_power(p).powi(2)).sum::<f64>().sqrt()
}

/// Level-wise ε-satisfaction of one measure `ρ = ‖r‖/den`: writing
/// `ρ = Σᵢ ρⁱ α^{1−i}`, requires `|ρⁱ| ≤ ε` for `i = 1..levels` and a
/// nonpositive leading power. Each `ρⁱ` is evaluated as the norm of the
/// residual coefficients at the corresponding power over the denominator's
/// leading coefficient, which stays meaningful even when the residual mixes
/// levels too far apart to share one coefficient window.
fn measure_within(r: &BanVector, den: &Ban, levels: usize, eps: f64) -> bool {
    let den_pow = den.power();
    let den_coeff = den.leading_coeff();
    let top = r
        .iter()
        .filter(|e| !e.is_zero())
        .map(|e| e.power())
        .max();
    let Some(top) = top else { return true };
    let floor = den_pow - levels as i64 + 1;
    let mut p = top.max(den_pow);
    while p >= floor {
        if level_norm(r, p) > eps * den_coeff {
            return false;
        }
        p -= 1;
    }
    true
}

/// Number of monosemium levels spanned by the nonzero content of `v`,
/// inclusive from the highest to the lowest stored power; at least 1 and at
/// most the BAN length.
pub fn level_span(v: &BanVector) -> usize {
    let mut hi: Option<i64> = None;
    let mut lo: Option<i64> = None;
    for e in v.iter() {
        if e.is_zero() {
            continue;
        }
        for (i, c) in e.coeffs().iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            let p = e.power() - i as i64;
            hi = Some(hi.map_or(p, |h| h.max(p)));
            lo = Some(lo.map_or(p, |l| l.min(p)));
        }
    }
    match (hi, lo) {
        (Some(h), Some(l)) => ((h - l + 1) as usize).min(v.ban_len()),
        _ => 1,
    }
}

/// True when every measure has a nonpositive leading power and, writing
/// `ρ = Σᵢ ρⁱ α^{1−i}`, `|ρⁱ| ≤ ε` for `i = 1..l` of its level count.
pub fn check_convergence(
    rho: &(Ban, Ban, Ban),
    levels: (usize, usize, usize),
    eps: f64,
) -> bool {
    let ok = |r: &Ban, l: usize| {
        if r.is_zero() {
            return true;
        }
        if r.power() > 0 {
            return false;
        }
        (0..l).all(|i| r.coeff_at_power(-(i as i64)).abs() <= eps)
    };
    ok(&rho.0, levels.0) && ok(&rho.1, levels.1) && ok(&rho.2, levels.2)
}

/// Solves the Newton block system
/// `[−Q Aᵀ I; A 0 0; S 0 X]·(Δx, Δλ, Δs) = (d_c, d_b, d_μ)`.
pub fn newton_solve(
    a: &BanMatrix,
    q: &BanMatrix,
    x: &BanVector,
    s: &BanVector,
    rhs: (&BanVector, &BanVector, &BanVector),
    iteration: usize,
) -> Result<(BanVector, BanVector, BanVector), SolverError> {
    let len = a.ban_len();
    let (m, n) = (a.rows(), a.cols());
    let dim = 2 * n + m;
    let mut big = BanMatrix::zeros(dim, dim, len);
    for i in 0..n {
        for j in 0..n {
            if !q[(i, j)].is_zero() {
                big[(i, j)] = -&q[(i, j)];
            }
        }
        for j in 0..m {
            big[(i, n + j)] = a[(j, i)].clone();
        }
        big[(i, n + m + i)] = Ban::real(1.0, len);
    }
    for i in 0..m {
        for j in 0..n {
            big[(n + i, j)] = a[(i, j)].clone();
        }
    }
    for i in 0..n {
        big[(n + m + i, i)] = s[i].clone();
        big[(n + m + i, n + m + i)] = x[i].clone();
    }
    let mut d = rhs.0.entries().to_vec();
    d.extend(rhs.1.entries().iter().cloned());
    d.extend(rhs.2.entries().iter().cloned());
    let mut d = BanVector::new(d);

    // Equilibrate by powers of α so that every pivot the elimination can
    // pick is power-0 with an O(1)-ish leading coefficient; reciprocals of
    // mixed-magnitude pivots would otherwise grow series coefficients that
    // drown the honest content of the directions. Monosemium scalings are
    // exact.
    let row_pow: Vec<i64> = (0..dim)
        .map(|i| {
            (0..dim)
                .filter(|&j| !big[(i, j)].is_zero())
                .map(|j| big[(i, j)].power())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for i in 0..dim {
        if row_pow[i] != 0 {
            for j in 0..dim {
                big[(i, j)] = big[(i, j)].mul_alpha_pow(-row_pow[i]);
            }
            d[i] = d[i].mul_alpha_pow(-row_pow[i]);
        }
    }
    let col_pow: Vec<i64> = (0..dim)
        .map(|j| {
            (0..dim)
                .filter(|&i| !big[(i, j)].is_zero())
                .map(|i| big[(i, j)].power())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for j in 0..dim {
        if col_pow[j] != 0 {
            for i in 0..dim {
                big[(i, j)] = big[(i, j)].mul_alpha_pow(-col_pow[j]);
            }
        }
    }

    let sol = big.lu_solve(&d).map_err(|e| match e {
        LinalgError::Singular { step } => SolverError::NewtonSingular { iteration, step },
        LinalgError::DimensionMismatch { .. } => unreachable!("shapes fixed here"),
    })?;
    let entries: Vec<Ban> = sol
        .iter()
        .enumerate()
        .map(|(j, e)| e.mul_alpha_pow(-col_pow[j]))
        .collect();
    Ok((
        BanVector::new(entries[..n].to_vec()),
        BanVector::new(entries[n..n + m].to_vec()),
        BanVector::new(entries[n + m..].to_vec()),
    ))
}

/// Damped ratio test `damping · min(lead_mon(min{−vᵢ/Δvᵢ : Δvᵢ < 0}), 1)`;
/// without any decreasing entry the cap alone applies.
pub fn step_length(v: &BanVector, dv: &BanVector, damping: f64) -> Ban {
    let len = v.ban_len();
    let mut best: Option<Ban> = None;
    for (vi, di) in v.iter().zip(dv.iter()) {
        if di.is_negative() {
            let ratio = (-vi).checked_div(di).expect("negative entry is nonzero");
            best = Some(match best {
                Some(b) if b <= ratio => b,
                _ => ratio,
            });
        }
    }
    let one = Ban::real(1.0, len);
    let nu = match best {
        Some(r) => {
            let r = r.lead_mon();
            if r < one {
                r
            } else {
                one
            }
        }
        None => one,
    };
    nu.scale(damping)
}

/// Adaptive centering `σ = lead_mon((μ_new/μ)³)`, floored away from an exact
/// zero target.
pub fn mehrotra_sigma(mu: &Ban, mu_new: &Ban) -> Ban {
    let len = mu.len();
    let ratio = mu_new.checked_div(mu).expect("centrality is positive");
    let sigma = (&ratio * &ratio * ratio).lead_mon();
    if sigma.is_zero() {
        Ban::real(1e-8, len)
    } else {
        sigma
    }
}

/// Replaces the vanishing side of every close-to-zero complementarity pair
/// with the shared monosemium `ξ = n·μ′/Σ zᵢ`, `zᵢ` the surviving side,
/// where `μ′ = coefficient · O(μ) · η` sits one magnitude below μ with an
/// O(1) coefficient, far enough from zero that the reborn entries do not
/// immediately re-qualify as vanishing.
///
/// A pair is close to zero when `O(xᵢsᵢ) ≤ O(μ)` and one side's leading
/// coefficient (its size relative to its own order of magnitude) has dropped
/// below `√(n·ε)`; that side is the vanishing one regardless of whether its
/// order of magnitude exceeds the survivor's.
pub fn update_zero_entries(
    x: &BanVector,
    s: &BanVector,
    mu: &Ban,
    eps: f64,
    recenter_coefficient: f64,
) -> (BanVector, BanVector) {
    let n = x.dim();
    let threshold = (n as f64 * eps).sqrt();
    let mu_mag = match mu.magnitude() {
        Ok(m) => m,
        Err(_) => return (x.clone(), s.clone()),
    };
    // flagged (index, replace_x_side, descend_only)
    let mut flagged: Vec<(usize, bool, bool)> = Vec::new();
    for i in 0..n {
        let prod = &x[i] * &s[i];
        if prod.is_zero() {
            continue;
        }
        let prod_mag = prod.magnitude().expect("positive");
        if prod_mag > mu_mag {
            continue;
        }
        let (cx, cs) = (x[i].leading_coeff(), s[i].leading_coeff());
        let replace_x = cx <= cs;
        let small = if replace_x { cx } else { cs };
        if small < threshold {
            flagged.push((i, replace_x, false));
        }
        // in a doubly degenerate pair the product sinks strictly below μ and
        // the larger side must descend too, or its leftover blocks its level
        if prod_mag < mu_mag {
            let big = if replace_x { cs } else { cx };
            if big < threshold {
                flagged.push((i, !replace_x, true));
            }
        }
    }
    if flagged.is_empty() {
        return (x.clone(), s.clone());
    }
    let len = x.ban_len();
    let mu_prime = mu_mag.mul_alpha_pow(-1).scale(recenter_coefficient);
    let mut x = x.clone();
    let mut s = s.clone();
    // one shared value per magnitude class of the surviving side, so that
    // every re-centered product lands at O(μ)·η
    let mut classes: Vec<i64> = flagged
        .iter()
        .map(|&(i, rx, _)| if rx { s[i].power() } else { x[i].power() })
        .collect();
    classes.sort_unstable();
    classes.dedup();
    for class in classes {
        let members: Vec<(usize, bool, bool)> = flagged
            .iter()
            .copied()
            .filter(|&(i, rx, _)| (if rx { s[i].power() } else { x[i].power() }) == class)
            .collect();
        let mut z_sum = Ban::zero(len);
        for &(i, replace_x, _) in &members {
            let z = if replace_x { s[i].clone() } else { x[i].clone() };
            z_sum = z_sum + z;
        }
        // the replacement is a single monosemium
        let xi = mu_prime
            .scale(n as f64)
            .checked_div(&z_sum)
            .expect("z of flagged pairs positive")
            .lead_mon();
        // a doubly degenerate side descends: honest content below the dying
        // lead survives, otherwise the entry is re-seeded at ξ
        let descend = |v: &Ban| -> Ban {
            let below = v - v.lead_mon();
            if below.is_positive() && below.power() >= xi.power() {
                below
            } else {
                xi.clone()
            }
        };
        for &(i, replace_x, descend_only) in &members {
            let target = if replace_x { &mut x[i] } else { &mut s[i] };
            *target = if descend_only { descend(target) } else { xi.clone() };
        }
    }
    (x, s)
}

/// Classifies the converged embedded solution.
///
/// The source problem is infeasible when the primal artificial variable is
/// non-negligible at the scale of the original variables; it is unbounded
/// when the dual of the bounding row is non-negligible, or when an
/// originally real-valued problem returns an infinite primal coordinate.
pub fn classify_result(
    x: &BanVector,
    lambda: &BanVector,
    emb: &EmbeddedNaqp,
    original_was_standard: bool,
    eps: f64,
) -> SolveStatus {
    let negligible = eps.sqrt();
    let x_orig = emb.problem.recover_original(x);
    let orig_scale_power =
        x_orig.iter().filter(|e| !e.is_zero()).map(|e| e.power()).max().unwrap_or(0);

    let art = &x[emb.artificial_col];
    if !art.is_zero() && art.power() >= orig_scale_power && art.leading_coeff() > negligible {
        return SolveStatus::OriginalInfeasible;
    }

    let bound_dual = &lambda[emb.bound_row];
    if !bound_dual.is_zero()
        && bound_dual.power() >= 0
        && bound_dual.leading_coeff().abs() > negligible
    {
        return SolveStatus::OriginalUnbounded;
    }
    if original_was_standard
        && x_orig
            .iter()
            .any(|e| e.power() >= 1 && e.leading_coeff().abs() > negligible)
    {
        return SolveStatus::OriginalUnbounded;
    }
    SolveStatus::Optimal
}

/// Runs the loop on an embedded problem and classifies the outcome.
pub fn solve(emb: &EmbeddedNaqp, cfg: &SolverConfig) -> Result<SolveResult, SolverError> {
    let mut result = run_ipm(&emb.problem, cfg)?;
    if result.status == SolveStatus::Optimal {
        result.status = classify_result(
            &result.x,
            &result.lambda,
            emb,
            emb.problem.meta.standard_input,
            cfg.eps,
        );
    }
    Ok(result)
}

/// Runs the loop directly on a standard-form problem with no embedding; the
/// input must be known feasible and bounded (testing aid).
pub fn solve_unembedded(p: &Naqp, cfg: &SolverConfig) -> Result<SolveResult, SolverError> {
    run_ipm(p, cfg)
}

fn run_ipm(p: &Naqp, cfg: &SolverConfig) -> Result<SolveResult, SolverError> {
    cfg.validate();
    let (a, b, c, q) = (&p.a, &p.b, &p.c, &p.q);
    let n = a.cols();
    let len = p.ban_len();
    let levels = (level_span(b), level_span(c), p.meta.priority_levels);
    let den_b = magnitude_or_one(b) + b.euclidean_norm();
    let den_c = magnitude_or_one(c) + c.euclidean_norm();

    let (mut x, mut lambda, mut s) = starting_point(a, b, c, q)?;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    // best-so-far iterate by the sum of per-level infeasibilities
    let mut best: Option<(f64, BanVector, BanVector, BanVector)> = None;

    // Once a level is ε-satisfied, residual content at and above it is
    // treated as done: it is masked out of the Newton right-hand side so
    // that its sub-ε leftovers cannot be amplified across magnitudes by
    // infinitesimal pivots. Termination always sees the raw residuals.
    let mut mask_above: Option<i64> = None;
    let mut prev_score = f64::INFINITY;
    let mut stall_count = 0usize;
    let ray_cols: Vec<bool> = p
        .meta
        .roles
        .iter()
        .map(|r| matches!(r, crate::model::ColumnRole::SplitPlus | crate::model::ColumnRole::SplitMinus))
        .collect();
    let no_ray_rows: Vec<bool> = vec![false; a.rows()];

    for it in 0..=cfg.max_it {
        let (r_b, r_c, r_mu, mu) = residuals_and_mu(a, b, c, q, &x, &lambda, &s);
        if mask_above.is_none() {
            // nothing above the starting centrality level is meaningful
            if let Ok(m) = mu.magnitude() {
                mask_above = Some(m.power());
            }
        }

        let x_original = p.recover_original(&x);
        let objective = p.objective_at(&x_original);
        trace.push(IterationRecord { iter: it, mu: mu.clone(), x_original, objective });

        let g = x.dot(&q.mat_vec(&x)).scale(0.5) + c.dot(&x);
        let den_g = if g.is_zero() {
            Ban::real(1.0, len)
        } else {
            g.magnitude().expect("nonzero") + g.abs()
        };
        let mu_vec = BanVector::new(vec![mu.clone()]);

        let score = {
            let spread = |r: &BanVector, den: &Ban, l: usize| -> f64 {
                (0..l as i64)
                    .map(|i| level_norm(r, den.power() - i) / den.leading_coeff())
                    .sum()
            };
            spread(&r_b, &den_b, levels.0)
                + spread(&r_c, &den_c, levels.1)
                + spread(&mu_vec, &den_g, levels.2)
        };
        if best.as_ref().is_none_or(|(prev, ..)| score < *prev) {
            best = Some((score, x.clone(), lambda.clone(), s.clone()));
        }
        if (score - prev_score).abs() <= 0.01 * score.abs() {
            stall_count += 1;
        } else {
            stall_count = 0;
        }
        prev_score = score;

        iterations = it;
        if measure_within(&r_b, &den_b, levels.0, cfg.eps)
            && measure_within(&r_c, &den_c, levels.1, cfg.eps)
            && measure_within(&mu_vec, &den_g, levels.2, cfg.eps)
        {
            converged = true;
            break;
        }
        if it == cfg.max_it {
            break;
        }

        let live = mask_above.unwrap_or(i64::MAX);
        let (r_b_live, r_c_live, r_mu_live) =
            (mask_levels(&r_b, live), mask_levels(&r_c, live), mask_levels(&r_mu, live));

        // predictor: pure Newton step toward the KKT point
        let (dx_p, dl_p, ds_p) = newton_solve(
            a,
            q,
            &x,
            &s,
            (&r_c_live.neg(), &r_b_live.neg(), &r_mu_live.neg()),
            it,
        )?;
        let dx_p = denoise_direction(&shape_direction(&dx_p, &x, live, &ray_cols));
        let dl_p = denoise_direction(&shape_direction(&dl_p, &lambda, live, &no_ray_rows));
        let ds_p = denoise_direction(&shape_direction(&ds_p, &s, live, &ray_cols));

        let nu_pp = step_length(&x, &dx_p, cfg.step_damping);
        let nu_pd = step_length(&s, &ds_p, cfg.step_damping);
        let nu_p = if nu_pp <= nu_pd { nu_pp } else { nu_pd };

        let x_aff = x.axpy(&nu_p, &dx_p);
        let s_aff = s.axpy(&nu_p, &ds_p);
        let mu_new = x_aff.dot(&s_aff).scale(1.0 / n as f64);
        let sigma = mehrotra_sigma(&mu, &mu_new);

        // corrector: restore centrality toward σμ; the second-order
        // complementarity term is scaled by the square of the affine step
        // actually taken, which is what the stepped products contain
        let target = &sigma * &mu;
        let nu_p_sq = &nu_p * &nu_p;
        let d_mu_c = BanVector::new(
            (0..n)
                .map(|i| &target - &nu_p_sq * &dx_p[i] * &ds_p[i])
                .collect(),
        );
        let zeros_n = BanVector::zeros(n, p.ban_len());
        let zeros_m = BanVector::zeros(a.rows(), p.ban_len());
        let d_mu_c = mask_levels(&d_mu_c, live);
        let (dx_c, dl_c, ds_c) =
            newton_solve(a, q, &x, &s, (&zeros_n, &zeros_m, &d_mu_c), it)?;
        // the corrector adjusts centrality along the predictor's step and
        // must not introduce magnitude levels above the predictor's own
        // action level for an entry
        let cap_to_predictor = |dc: &BanVector, dp: &BanVector, v: &BanVector| -> BanVector {
            BanVector::new(
                dc.iter()
                    .zip(dp.iter().zip(v.iter()))
                    .map(|(c, (pr, vi))| {
                        let cap = if pr.is_zero() { vi.power() } else { pr.power() };
                        if c.is_zero() || c.power() <= cap {
                            return c.clone();
                        }
                        let len = c.len();
                        let coeffs =
                            (0..len).map(|i| c.coeff_at_power(cap - i as i64)).collect();
                        Ban::new(cap, coeffs)
                    })
                    .collect(),
            )
        };
        let dx_c = cap_to_predictor(&dx_c, &dx_p, &x);
        let dl_c = cap_to_predictor(&dl_c, &dl_p, &lambda);
        let ds_c = cap_to_predictor(&ds_c, &ds_p, &s);

        let dx = denoise_direction(&shape_direction(&dx_p.add(&dx_c), &x, live, &ray_cols));
        let dl = denoise_direction(&shape_direction(&dl_p.add(&dl_c), &lambda, live, &no_ray_rows));
        let ds = denoise_direction(&shape_direction(&ds_p.add(&ds_c), &s, live, &ray_cols));

        let nu_x = step_length(&x, &dx, cfg.step_damping);
        let nu_s = step_length(&s, &ds, cfg.step_damping);
        let nu = if nu_x <= nu_s { nu_x } else { nu_s };

        if std::env::var("NAQP_DEBUG").is_ok() {
            eprintln!("it {it}: mu={mu} sigma={sigma} nu_p={nu_p} nu={nu} score={score}");
            eprintln!("  lambda={lambda}");
            eprintln!("  r_b={r_b}");
            eprintln!("  r_c={r_c}");
            eprintln!("  x={x}");
            eprintln!("  dx={dx}");
            eprintln!("  s={s}");
            eprintln!("  ds={ds}");
        }
        x = x.axpy(&nu, &dx).denoised();
        lambda = lambda.axpy(&nu, &dl).denoised();
        s = s.axpy(&nu, &ds).denoised();
        if std::env::var("NAQP_DEBUG").is_ok() {
            eprintln!("  x'={x}");
            eprintln!("  s'={s}");
        }

        if !(x.is_strictly_positive() && s.is_strictly_positive()) {
            eprintln!("INTERIOR VIOLATION at it {it}: nu={nu}");
            eprintln!("  x={x}");
            eprintln!("  dx={dx}");
            eprintln!("  s={s}");
            eprintln!("  ds={ds}");
            panic!("interiority lost");
        }

        // Re-centering presumes the current level is ε-optimized; firing it
        // mid-phase scatters the complementarity products across magnitude
        // levels and destabilizes the centering target. A level is done when
        // every measure's residual content at and above it is within ε of
        // its denominator scale.
        let down_to = |r: &BanVector, den: &Ban, tol: f64| -> bool {
            let head = den.power() - live; // levels from the top through live
            measure_within(r, den, head.max(0) as usize + 1, tol)
        };
        // Re-centering normally waits until the live level is ε-done; a
        // doubly degenerate pair can stall the level short of ε though, and
        // only its descent (which the re-centering performs) can finish it.
        let level_done = down_to(&r_b, &den_b, cfg.eps)
            && down_to(&r_c, &den_c, cfg.eps)
            && down_to(&mu_vec, &den_g, cfg.eps);
        let stall_after: usize = std::env::var("NAQP_STALL")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(3);
        let stalled = stall_after > 0
            && stall_count >= stall_after
            && down_to(&r_b, &den_b, cfg.eps.sqrt())
            && down_to(&r_c, &den_c, cfg.eps.sqrt())
            && down_to(&mu_vec, &den_g, cfg.eps.sqrt());
        let nearly_done = level_done || stalled;
        if std::env::var("NAQP_DEBUG").is_ok() {
            eprintln!("  it {it} gate={nearly_done}/{level_done} stalled={stalled} stall_count={stall_count} live={live}");
        }
        if nearly_done {
            let (nx, ns) = update_zero_entries(&x, &s, &mu, cfg.eps, cfg.recenter_coefficient);
            if std::env::var("NAQP_DEBUG").is_ok() {
                let changed = (0..nx.dim()).filter(|&i| nx[i] != x[i] || ns[i] != s[i]).count();
                eprintln!("  recenter at it {it}: {changed} entries changed; mu={mu}");
            }
            x = nx;
            s = ns;
        }
        if level_done {
            // the next level becomes the live one
            if let Ok(m) = mu.magnitude() {
                let live = m.power() - 1;
                mask_above = Some(mask_above.map_or(live, |p| p.min(live)));
            }
        }
    }

    if !converged {
        if let Some((_, bx, bl, bs)) = best {
            x = bx;
            lambda = bl;
            s = bs;
        }
    }

    let x_original = p.recover_original(&x);
    let objective = p.objective_at(&x_original);
    let objective_levels = (0..p.meta.priority_levels)
        .map(|i| objective.coeff_at_power(-(i as i64)))
        .collect();
    // duals are reported as computed for the internal minimization form
    let lambda_original = BanVector::new(lambda.entries().to_vec());

    Ok(SolveResult {
        status: if converged { SolveStatus::Optimal } else { SolveStatus::IterationLimit },
        x,
        lambda,
        s,
        x_original,
        lambda_original,
        objective,
        objective_levels,
        trace,
        iterations,
    })
}

#[cfg(test)]
mod tests;
