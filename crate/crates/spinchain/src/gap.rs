//! Closed-form gap machinery: region classification, contour-integral
//! Fourier coefficients, per-region gap integrals, the geometric series
//! route, rigorous finite-size bounds, and the correlation length.
//!
//! Everything revolves around a = |g² − δ_g²|. The spectrum is gapless in
//! the thermodynamic limit for a < 1 (gap ~ a^(N/2), exponentially small),
//! critical at a = 1 (gap ~ 1/N), and gapped for a > 1, where Heaviside
//! boundary-mode terms hold the gap open. The sign of the gap is carried
//! by sign[(g² − δ_g²)^(N/2)]: the ground state sits in the negative
//! parity sector exactly when g² < δ_g² and N/2 is odd.

use std::f64::consts::PI;

use thiserror::Error;

use crate::model::{self, HalfChainParity, ModelParams, DEGENERACY_TOL};
use crate::quad::{integrate, IntegrandSpec, QuadError, QuadPoint, QuadratureResult};
use crate::sum::CompensatedSum;

/// Width of the band around a = 1 inside which the coefficient series
/// converges too slowly to be useful (per-term ratio min(a, 1/a)^N → 1).
pub const NEAR_CRITICAL_BAND: f64 = 0.01;

/// Quadrature tolerance used by every analytic gap route.
const QUAD_REL_TOL: f64 = 1e-12;
const QUAD_ABS_TOL: f64 = 1e-300;

#[derive(Debug, Error)]
pub enum GapError {
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("coefficient series converges too slowly at a={a} (within {NEAR_CRITICAL_BAND} of the critical line)")]
    SlowConvergence { a: f64 },
    #[error("a={a} sits within tolerance of the critical line; critical-formula value {critical_value}, adjacent-region value {adjacent_value}")]
    AmbiguousRegion {
        a: f64,
        critical_value: f64,
        adjacent_value: f64,
    },
    #[error("operation requires the {expected:?} region, but parameters classify as {actual:?}")]
    WrongRegion { expected: Region, actual: Region },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CorrelationLengthError {
    #[error("correlation length diverges on the critical line a = 1")]
    Infinite,
    #[error("correlation length is undefined on the degenerate line a = 0")]
    ZeroField,
}

/// Phase region by a = |g² − δ_g²|.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Degenerate,
    Ising,
    Critical,
    Paramagnetic,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Region::Degenerate => write!(f, "Degenerate"),
            Region::Ising => write!(f, "Ising"),
            Region::Critical => write!(f, "Critical"),
            Region::Paramagnetic => write!(f, "Paramagnetic"),
        }
    }
}

/// Classification of a parameter point.
#[derive(Debug, Clone, Copy)]
pub struct RegionClass {
    /// |g² − δ_g²|.
    pub a: f64,
    pub region: Region,
    /// G² = max{g², δ_g²}.
    pub g_max_sq: f64,
    /// f² = min{g², δ_g²}.
    pub g_min_sq: f64,
    /// sign[(g² − δ_g²)^(N/2)]: −1 iff g² < δ_g² and N/2 odd.
    pub sign_factor: i32,
}

/// Classify by comparing a against 0 and 1 with absolute tolerance `tol`.
pub fn classify(params: &ModelParams, tol: f64) -> RegionClass {
    let g2 = params.g() * params.g();
    let d2 = params.delta_g() * params.delta_g();
    let a = (g2 - d2).abs();
    let region = if a <= tol {
        Region::Degenerate
    } else if (a - 1.0).abs() <= tol {
        Region::Critical
    } else if a < 1.0 {
        Region::Ising
    } else {
        Region::Paramagnetic
    };
    let sign_factor = if g2 < d2 && params.half_chain_parity() == HalfChainParity::Odd {
        -1
    } else {
        1
    };
    RegionClass {
        a,
        region,
        g_max_sq: g2.max(d2),
        g_min_sq: g2.min(d2),
        sign_factor,
    }
}

/// One combined cosine coefficient u_l + v_l of the two dispersion
/// branches (2/π normalization for every l, so the l = 0 value is twice
/// the constant term of the cosine series).
#[derive(Debug, Clone, Copy)]
pub struct FourierCoefficient {
    pub index: usize,
    pub combined_value: f64,
}

/// Shared quadrature state carried alongside each coefficient value.
struct CoefficientValue {
    value: f64,
    quad_error: f64,
}

/// sign((g² − δ_g²)^l) for the prefactor bookkeeping.
fn prefactor_sign(params: &ModelParams, l: usize) -> f64 {
    let g2 = params.g() * params.g();
    let d2 = params.delta_g() * params.delta_g();
    if g2 >= d2 || l.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// The stable square-root bracket of the contour-integral kernels:
/// [ (1−t²)·factor / ( sqrt((1−t²)·factor + A²t²) + A·t ) ]^(1/2),
/// where multiplying by the conjugate removed the subtraction that
/// cancels catastrophically as t → 1.
fn contour_bracket(pt: QuadPoint, factor: f64, a_tot: f64) -> f64 {
    let one_minus_t2 = pt.one_minus_t * (1.0 + pt.t);
    let num = one_minus_t2 * factor;
    let denom = (num + a_tot * a_tot * pt.t * pt.t).sqrt() + a_tot * pt.t;
    (num / denom).sqrt()
}

/// The branch-cut integral Iₗ = ∫₀¹ t^(2l−3/2)·bracket dt with the kernel
/// factor (1 − a²t²) below/at criticality and (a² − t²) above.
fn coefficient_integral(
    l: usize,
    a: f64,
    a_tot: f64,
    paramagnetic: bool,
) -> Result<QuadratureResult, QuadError> {
    let power = 2.0 * l as f64 - 1.5;
    let spec = IntegrandSpec::new(
        move |pt: QuadPoint| {
            let factor = if paramagnetic {
                (a - pt.t) * (a + pt.t)
            } else {
                (1.0 - a * pt.t) * (1.0 + a * pt.t)
            };
            pt.t.powf(power) * contour_bracket(pt, factor, a_tot)
        },
        power,
        0.5,
    );
    integrate(&spec, QUAD_REL_TOL, QUAD_ABS_TOL)
}

/// ε_k^+ + ε_k^- integrated directly over k ∈ [0, π/2], mapped to [0, 1].
fn total_dispersion_integral(params: &ModelParams) -> Result<QuadratureResult, QuadError> {
    let p = *params;
    let spec = IntegrandSpec::new(
        move |pt: QuadPoint| p.dispersion(std::f64::consts::FRAC_PI_2 * pt.t).total(),
        0.0,
        0.0,
    );
    integrate(&spec, QUAD_REL_TOL, QUAD_ABS_TOL)
}

fn coefficient_value(l: usize, params: &ModelParams) -> Result<CoefficientValue, GapError> {
    let rc = classify(params, DEGENERACY_TOL);
    let g2 = params.g() * params.g();
    let d2 = params.delta_g() * params.delta_g();
    match rc.region {
        Region::Degenerate => Ok(CoefficientValue {
            value: if l == 0 {
                4.0 * (1.0 + (g2 + d2) / 2.0).sqrt()
            } else {
                0.0
            },
            quad_error: 0.0,
        }),
        _ if l == 0 => {
            // The contour form picks up an extra pole at the origin for
            // l = 0, so this index integrates the dispersion directly:
            // u_0 + v_0 = (2/π)∫over the zone = 2·∫₀¹ (ε⁺+ε⁻)((π/2)t) dt.
            let r = total_dispersion_integral(params)?;
            Ok(CoefficientValue {
                value: 2.0 * r.value,
                quad_error: 2.0 * r.error_estimate,
            })
        }
        Region::Ising | Region::Critical => {
            let a = if rc.region == Region::Critical {
                1.0
            } else {
                rc.a
            };
            let r = coefficient_integral(l, a, 1.0 + g2 + d2, false)?;
            let scale = a.powf(l as f64);
            let signed = -(4.0 / PI) * prefactor_sign(params, l) * scale;
            Ok(CoefficientValue {
                value: signed * r.value,
                quad_error: (4.0 / PI) * scale * r.error_estimate,
            })
        }
        Region::Paramagnetic => {
            let r = coefficient_integral(l, rc.a, 1.0 + g2 + d2, true)?;
            let scale = rc.a.powf(-(l as f64));
            let signed = -(4.0 / PI) * prefactor_sign(params, l) * scale;
            Ok(CoefficientValue {
                value: signed * r.value,
                quad_error: (4.0 / PI) * scale * r.error_estimate,
            })
        }
    }
}

/// u_l + v_l through the deformed contour integral (direct dispersion
/// quadrature for l = 0, closed form on the degenerate line).
pub fn fourier_coefficient_sum(
    l: usize,
    params: &ModelParams,
) -> Result<FourierCoefficient, GapError> {
    let cv = coefficient_value(l, params)?;
    Ok(FourierCoefficient {
        index: l,
        combined_value: cv.value,
    })
}

/// Which route produced a gap value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapMethod {
    DirectSum,
    Integral,
    Series,
}

/// A gap value Δε = ε⁻ − ε⁺ with its computation route and a bound on the
/// numerical error of that route.
#[derive(Debug, Clone, Copy)]
pub struct GapResult {
    pub value: f64,
    pub method: GapMethod,
    pub error_estimate: f64,
}

/// The exact momentum-space sum wrapped as a [`GapResult`].
///
/// The error bound covers per-term dispersion rounding; the compensated
/// accumulation itself contributes O(eps·|gap|).
pub fn gap_direct(params: &ModelParams) -> GapResult {
    let (mut terms, abs_sum) = model::gap_direct_terms(params);
    let value = crate::sum::sum_by_magnitude(&mut terms);
    GapResult {
        value,
        method: GapMethod::DirectSum,
        error_estimate: 4.0 * f64::EPSILON * abs_sum,
    }
}

/// The two Heaviside boundary-mode terms of the gap. Their activation
/// conditions |δ_g| > sqrt(1+g²) and |g| > sqrt(1+δ_g²) are mutually
/// exclusive (both would force 0 > 2).
fn heaviside_terms(params: &ModelParams, sign_factor: f64) -> f64 {
    let modes = params.boundary_modes();
    let t_delta = params.delta_g().abs() - modes.half_pi_scale;
    let t_g = params.g().abs() - modes.zero_scale;
    debug_assert!(
        !(t_delta > 0.0 && t_g > 0.0),
        "contradictory Heaviside conditions at g={}, delta_g={}",
        params.g(),
        params.delta_g()
    );
    let mut total = 0.0;
    if t_delta > 0.0 {
        total += sign_factor * t_delta;
    }
    if t_g > 0.0 {
        total += t_g;
    }
    total
}

/// Geometric sum Σ_{m=0}^{n−1} t^(2m), the removable-singularity form of
/// (1 − t²)/(1 − t^(2n)).
fn even_geometric_sum(t: f64, n: usize) -> f64 {
    let t2 = t * t;
    let mut term = 1.0;
    let mut acc = 1.0;
    for _ in 1..n {
        term *= t2;
        if term < f64::EPSILON * acc {
            // Remaining terms are below the rounding floor of the sum.
            acc += term / (1.0 - t2);
            break;
        }
        acc += term;
    }
    acc
}

fn critical_gap_integrand(pt: QuadPoint, n: usize, g_max_sq: f64) -> f64 {
    let nf = n as f64;
    let one_minus_t2 = pt.one_minus_t * (1.0 + pt.t);
    let two_g2_t = 2.0 * g_max_sq * pt.t;
    let root = ((one_minus_t2 * one_minus_t2 + two_g2_t * two_g2_t).sqrt() + two_g2_t).sqrt();
    (4.0 * nf / PI) * pt.t.powf(nf - 1.5) / (even_geometric_sum(pt.t, n) * root)
}

/// Δε through the per-region closed-form integral.
///
/// Ising: (1/2)·sign·a^(N/2)·∫ t^(N−3/2)/(1−(√a·t)^(2N))·bracket(1−a²t²);
/// paramagnetic: Heaviside terms + (1/2)·sign·a^(−N/2)·∫ with the kernel
/// substitutions a²−t² and (t/√a)^(2N); critical: the a → 1 limit with
/// G² = max{g², δ_g²}; degenerate: exactly zero.
pub fn gap_integral(params: &ModelParams) -> Result<GapResult, GapError> {
    gap_integral_classified(params, &classify(params, DEGENERACY_TOL))
}

/// [`gap_integral`] under a caller-supplied classification, so a CLI can
/// widen the critical snap band. With `strict`, a point within `tol` of
/// the critical line (but not exactly on it) is refused with both the
/// critical-formula and adjacent-region values attached.
pub fn gap_integral_with(
    params: &ModelParams,
    tol: f64,
    strict: bool,
) -> Result<GapResult, GapError> {
    let rc = classify(params, tol);
    if strict && rc.region == Region::Critical && (rc.a - 1.0).abs() > DEGENERACY_TOL {
        let critical = gap_integral_classified(params, &rc)?;
        let exact = classify(params, DEGENERACY_TOL);
        let adjacent = gap_integral_classified(params, &exact)?;
        return Err(GapError::AmbiguousRegion {
            a: rc.a,
            critical_value: critical.value,
            adjacent_value: adjacent.value,
        });
    }
    gap_integral_classified(params, &rc)
}

fn gap_integral_classified(params: &ModelParams, rc: &RegionClass) -> Result<GapResult, GapError> {
    let n = params.n_sites();
    let nf = n as f64;
    let half = params.half_n() as f64;
    let g2 = params.g() * params.g();
    let d2 = params.delta_g() * params.delta_g();
    let a_tot = 1.0 + g2 + d2;
    let sign = rc.sign_factor as f64;
    match rc.region {
        Region::Degenerate => Ok(GapResult {
            value: 0.0,
            method: GapMethod::Integral,
            error_estimate: 0.0,
        }),
        Region::Critical => {
            let g_max_sq = rc.g_max_sq;
            let spec = IntegrandSpec::new(
                move |pt: QuadPoint| critical_gap_integrand(pt, n, g_max_sq),
                nf - 1.5,
                0.5,
            );
            let r = integrate(&spec, QUAD_REL_TOL, QUAD_ABS_TOL)?;
            Ok(GapResult {
                value: sign * 0.5 * r.value,
                method: GapMethod::Integral,
                error_estimate: 0.5 * r.error_estimate,
            })
        }
        Region::Ising => {
            let a = rc.a;
            let sqrt_a = a.sqrt();
            let spec = IntegrandSpec::new(
                move |pt: QuadPoint| {
                    let factor = (1.0 - a * pt.t) * (1.0 + a * pt.t);
                    let resummed = 1.0 - (sqrt_a * pt.t).powf(2.0 * nf);
                    (4.0 * nf / PI) * pt.t.powf(nf - 1.5) / resummed
                        * contour_bracket(pt, factor, a_tot)
                },
                nf - 1.5,
                0.5,
            );
            let r = integrate(&spec, QUAD_REL_TOL, QUAD_ABS_TOL)?;
            let prefactor = 0.5 * a.powf(half);
            Ok(GapResult {
                value: sign * prefactor * r.value,
                method: GapMethod::Integral,
                error_estimate: prefactor * r.error_estimate,
            })
        }
        Region::Paramagnetic => {
            let a = rc.a;
            let inv_sqrt_a = 1.0 / a.sqrt();
            let spec = IntegrandSpec::new(
                move |pt: QuadPoint| {
                    let factor = (a - pt.t) * (a + pt.t);
                    let resummed = 1.0 - (inv_sqrt_a * pt.t).powf(2.0 * nf);
                    (4.0 * nf / PI) * pt.t.powf(nf - 1.5) / resummed
                        * contour_bracket(pt, factor, a_tot)
                },
                nf - 1.5,
                0.5,
            );
            let r = integrate(&spec, QUAD_REL_TOL, QUAD_ABS_TOL)?;
            let theta = heaviside_terms(params, sign);
            let prefactor = 0.5 * a.powf(-half);
            Ok(GapResult {
                value: theta + sign * prefactor * r.value,
                method: GapMethod::Integral,
                error_estimate: prefactor * r.error_estimate + f64::EPSILON * theta.abs(),
            })
        }
    }
}

/// Δε through the coefficient series: Heaviside terms minus (N/2) times
/// the sum of combined coefficients at indices (2n+1)·N/2.
///
/// Terms fall off geometrically with ratio min(a, 1/a)^N, so the sum is
/// truncated once the rigorous bound on the remainder drops under `tol`.
/// Refuses within [`NEAR_CRITICAL_BAND`] of the critical line, where the
/// ratio approaches 1.
pub fn gap_series(params: &ModelParams, tol: f64) -> Result<GapResult, GapError> {
    let rc = classify(params, DEGENERACY_TOL);
    if rc.region == Region::Degenerate {
        // Every l ≥ 1 coefficient vanishes and no Heaviside term is active.
        return Ok(GapResult {
            value: 0.0,
            method: GapMethod::Series,
            error_estimate: 0.0,
        });
    }
    if (rc.a - 1.0).abs() < NEAR_CRITICAL_BAND {
        return Err(GapError::SlowConvergence { a: rc.a });
    }
    let half = params.half_n();
    let half_f = half as f64;
    let ratio = if rc.a < 1.0 {
        rc.a.powf(params.n_sites() as f64)
    } else {
        rc.a.powf(-(params.n_sites() as f64))
    };
    let sign = rc.sign_factor as f64;
    let theta = heaviside_terms(params, sign);

    let mut series = CompensatedSum::new();
    let mut quad_error = 0.0;
    let mut first_magnitude = 0.0;
    let mut truncation = f64::INFINITY;
    const MAX_TERMS: usize = 2000;
    for term_index in 0..MAX_TERMS {
        let l = (2 * term_index + 1) * half;
        let cv = coefficient_value(l, params)?;
        series.add(cv.value);
        quad_error += half_f * cv.quad_error;
        if term_index == 0 {
            first_magnitude = cv.value.abs();
            if first_magnitude == 0.0 {
                // Underflowed below f64 range; the gap is indistinguishable
                // from the Heaviside terms alone.
                truncation = 0.0;
                break;
            }
        }
        // |c_(next)| <= |c_(N/2)| · ratio^(terms so far), since the kernel
        // integral shrinks monotonically with l.
        truncation = half_f * first_magnitude * ratio.powi(term_index as i32 + 1);
        if truncation < tol {
            break;
        }
        if term_index + 1 == MAX_TERMS {
            return Err(GapError::SlowConvergence { a: rc.a });
        }
    }
    Ok(GapResult {
        value: theta - half_f * series.value(),
        method: GapMethod::Series,
        error_estimate: quad_error + truncation + f64::EPSILON * theta.abs(),
    })
}

/// Two-sided bound on |Δε|.
#[derive(Debug, Clone, Copy)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
}

/// Critical-line bound: (tan(π/4N) + π/12N)/(2√G²) ≤ |Δε| ≤ tan(π/4N).
///
/// The upper bound is attained with equality when G² = 1 (homogeneous
/// critical chain), so comparisons need an equality-tolerant cushion.
pub fn bounds_critical(params: &ModelParams) -> Result<BoundPair, GapError> {
    let rc = classify(params, DEGENERACY_TOL);
    if rc.region != Region::Critical {
        return Err(GapError::WrongRegion {
            expected: Region::Critical,
            actual: rc.region,
        });
    }
    let nf = params.n_sites() as f64;
    let tan_term = (PI / (4.0 * nf)).tan();
    Ok(BoundPair {
        lower: (tan_term + PI / (12.0 * nf)) / (2.0 * rc.g_max_sq.sqrt()),
        upper: tan_term,
    })
}

/// Gapless-phase bound, exponentially small in N:
/// max of a √(1−a)/√N branch and a 1/N branch below, and the matching
/// two-term expression above. Valid for 0 < a < 1.
pub fn bounds_ising(params: &ModelParams) -> Result<BoundPair, GapError> {
    let rc = classify(params, DEGENERACY_TOL);
    if rc.region != Region::Ising {
        return Err(GapError::WrongRegion {
            expected: Region::Ising,
            actual: rc.region,
        });
    }
    let a = rc.a;
    let nf = params.n_sites() as f64;
    let half = params.half_n() as f64;
    let g2 = params.g() * params.g();
    let d2 = params.delta_g() * params.delta_g();
    let a_half = a.powf(half);
    let lower_first = a_half * (2.0 / PI.sqrt()) * (1.0 - a).sqrt() / nf.sqrt();
    let lower_second = a_half * 4.0 * a.sqrt() / (PI * nf);
    let lower = lower_first.max(lower_second) / (2.0 * (2.0 * (1.0 + g2 + d2)).sqrt());
    let upper = ((2.0 * (1.0 + a)).sqrt() / 2.0)
        * (a_half * PI * a.sqrt() / (2.0 * nf - 1.0)
            + a_half * 2.0 * (1.0 - a).sqrt() / (nf - 1.0).sqrt());
    Ok(BoundPair { lower, upper })
}

/// Correlation length ξ = 1/|ln a|.
///
/// The proportionality constant is fixed to 1 by convention; only the
/// scaling toward the critical lines carries physical content. Diverges at
/// a = 1 and is undefined on the degenerate line a = 0.
pub fn correlation_length(params: &ModelParams) -> Result<f64, CorrelationLengthError> {
    let g2 = params.g() * params.g();
    let d2 = params.delta_g() * params.delta_g();
    let a = (g2 - d2).abs();
    if a <= DEGENERACY_TOL {
        Err(CorrelationLengthError::ZeroField)
    } else if (a - 1.0).abs() <= DEGENERACY_TOL {
        Err(CorrelationLengthError::Infinite)
    } else {
        Ok(1.0 / a.ln().abs())
    }
}

/// Direct momentum-space Fourier coefficients of the individual dispersion
/// branches, used as the independent cross-check for the contour route.
/// Not part of the production path.
pub mod test_support {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn branch_coefficient(
        l: usize,
        params: &ModelParams,
        branch: impl Fn(&ModelParams, f64) -> f64 + Copy,
    ) -> Result<f64, QuadError> {
        let p = *params;
        // (2/π)∫_{-π/2}^{π/2} cos(2kl)·branch dk = 2∫₀¹ cos(πlt)·branch((π/2)t) dt.
        // High-index coefficients are tiny differences of O(1) oscillatory
        // lobes, so an absolute floor near the f64 noise level is needed on
        // top of the relative target.
        let spec = IntegrandSpec::new(
            move |pt: QuadPoint| (PI * l as f64 * pt.t).cos() * branch(&p, FRAC_PI_2 * pt.t),
            0.0,
            0.0,
        );
        Ok(2.0 * integrate(&spec, 1e-12, 1e-13)?.value)
    }

    /// u_l: coefficient of the upper branch (2/π normalization).
    pub fn upper_branch_coefficient(l: usize, params: &ModelParams) -> Result<f64, QuadError> {
        branch_coefficient(l, params, |p, k| p.dispersion(k).upper)
    }

    /// v_l: coefficient of the lower branch (2/π normalization).
    pub fn lower_branch_coefficient(l: usize, params: &ModelParams) -> Result<f64, QuadError> {
        branch_coefficient(l, params, |p, k| p.dispersion(k).lower)
    }

    /// u_l + v_l by a single direct quadrature of the branch total.
    pub fn combined_coefficient(l: usize, params: &ModelParams) -> Result<f64, QuadError> {
        branch_coefficient(l, params, |p, k| p.dispersion(k).total())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::gap_direct_sum;
    use crate::rng::SplitMix64;
    use proptest::prelude::*;

    fn p(g: f64, d: f64, n: usize) -> ModelParams {
        ModelParams::new(g, d, n).unwrap()
    }

    #[test]
    fn classify_examples() {
        let rc = classify(&p(2f64.sqrt(), 1.0, 8), DEGENERACY_TOL);
        assert_eq!(rc.region, Region::Critical);
        assert!((rc.g_max_sq - 2.0).abs() < 1e-15);

        let rc = classify(&p(0.3, 0.3, 8), DEGENERACY_TOL);
        assert_eq!(rc.region, Region::Degenerate);

        let rc = classify(&p(2.0, 0.5, 6), DEGENERACY_TOL);
        assert_eq!(rc.region, Region::Paramagnetic);
        assert_eq!(rc.sign_factor, 1);

        // Negative sign only for dominant alternation with odd N/2.
        assert_eq!(classify(&p(0.4, 0.9, 6), DEGENERACY_TOL).sign_factor, -1);
        assert_eq!(classify(&p(0.4, 0.9, 8), DEGENERACY_TOL).sign_factor, 1);
    }

    #[test]
    fn coefficient_zero_fields() {
        let c = fourier_coefficient_sum(0, &p(0.0, 0.0, 8)).unwrap();
        assert!((c.combined_value - 4.0).abs() < 1e-14);
        let c = fourier_coefficient_sum(3, &p(0.0, 0.0, 8)).unwrap();
        assert_eq!(c.combined_value, 0.0);
    }

    #[test]
    fn coefficient_sign_bookkeeping() {
        // g² < δ² and odd l: negative magnitude times (g²−δ²)³ < 0 is > 0.
        let c = fourier_coefficient_sum(3, &p(0.6, 0.8, 8)).unwrap();
        assert!(c.combined_value > 0.0, "c3={}", c.combined_value);
        // Even l keeps the negative sign.
        let c = fourier_coefficient_sum(2, &p(0.6, 0.8, 8)).unwrap();
        assert!(c.combined_value < 0.0);
    }

    #[test]
    fn coefficients_match_direct_momentum_quadrature() {
        for &(g, d) in &[(0.6, 0.2), (1.5, 0.3), (0.2, 1.8), (0.6, 0.8)] {
            let params = p(g, d, 8);
            for l in 0..=5 {
                let contour = fourier_coefficient_sum(l, &params).unwrap().combined_value;
                let direct = test_support::combined_coefficient(l, &params).unwrap();
                assert!(
                    (contour - direct).abs() < 1e-10,
                    "l={l} g={g} d={d}: contour={contour} direct={direct}"
                );
                let split = test_support::upper_branch_coefficient(l, &params).unwrap()
                    + test_support::lower_branch_coefficient(l, &params).unwrap();
                assert!((split - direct).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn endpoint_identities_from_coefficient_series() {
        // With the series constant c_0/2, Σ c_l reproduces ε⁺+ε⁻ at k = 0
        // and the alternating sum reproduces the k = π/2 pair.
        for &(g, d) in &[(0.6, 0.2), (0.3, 0.8)] {
            let params = p(g, d, 8);
            let a = classify(&params, DEGENERACY_TOL).a;
            let terms = (28.0 / a.ln().abs()).ceil() as usize + 4;
            let c0 = fourier_coefficient_sum(0, &params).unwrap().combined_value;
            let mut plain = c0 / 2.0;
            let mut alternating = c0 / 2.0;
            for l in 1..=terms {
                let c = fourier_coefficient_sum(l, &params).unwrap().combined_value;
                plain += c;
                alternating += if l % 2 == 0 { c } else { -c };
            }
            let at0 = params.dispersion(0.0).total();
            let at_half = params.dispersion(std::f64::consts::FRAC_PI_2).total();
            assert!(
                (plain - at0).abs() < 1e-9,
                "g={g} d={d}: sum={plain} vs {at0}"
            );
            assert!(
                (alternating - at_half).abs() < 1e-9,
                "g={g} d={d}: alt={alternating} vs {at_half}"
            );
        }
    }

    #[test]
    fn integral_route_examples() {
        assert_eq!(gap_integral(&p(0.8, 0.8, 12)).unwrap().value, 0.0);

        let params = p(0.5, 0.3, 8);
        let integral = gap_integral(&params).unwrap().value;
        let direct = gap_direct_sum(&params);
        assert!(
            (integral - direct).abs() < 1e-10,
            "integral={integral} direct={direct}"
        );

        let params = p(2f64.sqrt(), 1.0, 16);
        let integral = gap_integral(&params).unwrap().value;
        let bounds = bounds_critical(&params).unwrap();
        assert!(bounds.lower <= integral.abs() && integral.abs() <= bounds.upper * (1.0 + 1e-9));
    }

    #[test]
    fn series_route_examples() {
        let r = gap_series(&p(2.0, 0.0, 8), 1e-12).unwrap();
        assert!(r.value > 1.0, "series={}", r.value);

        let params = p(0.5, 0.3, 8);
        let series = gap_series(&params, 1e-12).unwrap().value;
        assert!((series - gap_direct_sum(&params)).abs() < 1e-10);

        assert_eq!(gap_series(&p(0.9, 0.9, 12), 1e-12).unwrap().value, 0.0);

        assert!(matches!(
            gap_series(&p(1.002, 0.1, 8), 1e-12),
            Err(GapError::SlowConvergence { .. })
        ));
    }

    #[test]
    fn three_routes_agree_within_error_estimates() {
        let mut rng = SplitMix64::new(0x0DD_BA11);
        let sizes = [4usize, 6, 8, 12, 16];
        let mut checked = 0;
        while checked < 25 {
            let g = rng.uniform(-2.0, 2.0);
            let d = rng.uniform(-2.0, 2.0);
            let a = (g * g - d * d).abs();
            if a < 0.02 || (a - 1.0).abs() < 0.02 {
                continue;
            }
            let params = p(g, d, *rng.pick(&sizes));
            let direct = gap_direct(&params);
            let integral = gap_integral(&params).unwrap();
            let series = gap_series(&params, 1e-13).unwrap();
            let pairs = [
                (&direct, &integral),
                (&direct, &series),
                (&integral, &series),
            ];
            for (x, y) in pairs {
                let allowed = x.error_estimate + y.error_estimate;
                assert!(
                    (x.value - y.value).abs() <= allowed.max(1e-14),
                    "{:?} vs {:?} at g={g} d={d} n={}: {} vs {} (allowed {allowed:.2e})",
                    x.method,
                    y.method,
                    params.n_sites(),
                    x.value,
                    y.value,
                );
            }
            checked += 1;
        }
    }

    #[test]
    fn routes_hold_up_at_extreme_fields() {
        // Strong fields push the kernel scale A = 1 + g² + δ² to ~2500 and
        // the paramagnetic prefactor a^(-N/2) below 1e-27.
        for &(g, d, n) in &[
            (50.0, 0.5, 16usize),
            (-30.0, 29.5, 8),
            (0.001, 40.0, 12),
            (7.0, -7.1, 20),
        ] {
            let params = p(g, d, n);
            let direct = gap_direct_sum(&params);
            let integral = gap_integral(&params).unwrap().value;
            let series = gap_series(&params, 1e-13).unwrap().value;
            for v in [integral, series] {
                assert!(
                    ((v - direct) / direct).abs() < 1e-12,
                    "g={g} d={d} n={n}: {v} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn integral_resolves_the_near_critical_boundary_layer() {
        // Just outside the slow-series band the resummed kernel develops a
        // boundary layer of width ~|a-1| at t = 1; the conjugate form plus
        // tanh-sinh must still track the exact sum at large N.
        for da in [0.011f64, -0.011, 0.02, -0.02] {
            let a_target = 1.0 + da;
            let g = (a_target + 1.0).sqrt();
            let params = p(g, 1.0, 64);
            let direct = gap_direct_sum(&params);
            let integral = gap_integral(&params).unwrap().value;
            assert!(
                ((integral - direct) / direct).abs() < 1e-11,
                "a={a_target}: integral={integral} direct={direct}"
            );
        }
    }

    #[test]
    fn critical_bounds_examples() {
        let b = bounds_critical(&p(2f64.sqrt(), 1.0, 4)).unwrap();
        assert!((b.upper - (PI / 16.0).tan()).abs() < 1e-15);
        assert!(b.lower < b.upper);

        let params = p(2f64.sqrt(), 1.0, 64);
        let gap = gap_direct_sum(&params).abs();
        let b = bounds_critical(&params).unwrap();
        assert!(b.lower <= gap && gap <= b.upper);

        // Homogeneous critical chain: the upper bound is saturated.
        let params = p(1.0, 0.0, 32);
        let gap = gap_direct_sum(&params).abs();
        let b = bounds_critical(&params).unwrap();
        assert!(b.lower <= gap && gap <= b.upper * (1.0 + 1e-12));
        assert!((gap - b.upper).abs() < 1e-13 * b.upper);
    }

    #[test]
    fn ising_bounds_examples() {
        let params = p(0.5, 0.3, 8);
        let gap = gap_direct_sum(&params).abs();
        let b = bounds_ising(&params).unwrap();
        assert!(b.lower <= gap && gap <= b.upper, "{gap} in [{:?}]", b);

        // As a → 1⁻ the √(1−a) branch of the lower bound dies and the 1/N
        // branch keeps it positive.
        let near = p(1.37113092008, 0.96, 8); // a ≈ 0.958
        let rc = classify(&near, DEGENERACY_TOL);
        assert_eq!(rc.region, Region::Ising);
        let nf = 8.0f64;
        let first = rc.a.powf(4.0) * (2.0 / PI.sqrt()) * (1.0 - rc.a).sqrt() / nf.sqrt();
        let second = rc.a.powf(4.0) * 4.0 * rc.a.sqrt() / (PI * nf);
        assert!(second > first);

        // Homogeneous chain recovered with a = g².
        let params = p(0.3, 0.0, 20);
        let rc = classify(&params, DEGENERACY_TOL);
        assert!((rc.a - 0.09).abs() < 1e-15);
        let gap = gap_integral(&params).unwrap().value.abs();
        let b = bounds_ising(&params).unwrap();
        assert!(b.lower <= gap && gap <= b.upper);
    }

    #[test]
    fn bounds_reject_wrong_region() {
        assert!(matches!(
            bounds_critical(&p(0.5, 0.3, 8)),
            Err(GapError::WrongRegion { .. })
        ));
        assert!(matches!(
            bounds_ising(&p(2.0, 0.0, 8)),
            Err(GapError::WrongRegion { .. })
        ));
    }

    #[test]
    fn correlation_length_expansions() {
        // Near g = 0 with unit alternation, ξ ≈ 1/g².
        let xi = correlation_length(&p(0.1, 1.0, 8)).unwrap();
        assert!((xi / 100.0 - 1.0).abs() < 0.05, "xi={xi}");

        // Near the critical field, ξ ≈ 1/(2√2·|√2 − g|).
        let g = 2f64.sqrt() - 0.01;
        let xi = correlation_length(&p(g, 1.0, 8)).unwrap();
        let target = 1.0 / (2.0 * 2f64.sqrt() * 0.01);
        assert!((xi / target - 1.0).abs() < 0.05, "xi={xi} target={target}");

        // ln a = −1 gives ξ = 1 exactly.
        let a_target = (-1.0f64).exp();
        let g = (1.0 + a_target).sqrt();
        let xi = correlation_length(&p(g, 1.0, 8)).unwrap();
        assert!((xi - 1.0).abs() < 1e-12);

        assert_eq!(
            correlation_length(&p(0.7, 0.7, 8)).unwrap_err(),
            CorrelationLengthError::ZeroField
        );
        assert_eq!(
            correlation_length(&p(2f64.sqrt(), 1.0, 8)).unwrap_err(),
            CorrelationLengthError::Infinite
        );
    }

    #[test]
    fn degenerate_line_gap_vanishes_by_direct_sum() {
        let mut rng = SplitMix64::new(0xDE6E);
        for _ in 0..50 {
            let g = rng.uniform(-2.0, 2.0);
            let d = if rng.next_f64() < 0.5 { g } else { -g };
            let n = *rng.pick(&[4usize, 6, 8, 12, 16, 32]);
            let gap = gap_direct_sum(&p(g, d, n));
            assert!(gap.abs() <= 1e-12, "g={g} n={n}: gap={gap:e}");
        }
    }

    #[test]
    #[allow(clippy::approx_constant)] // deliberately 1.8e-7 off sqrt(2)
    fn strict_mode_flags_ambiguous_region() {
        // a ≈ 1 − 1.8e-7 with a snap tolerance of 1e-6.
        let params = p(1.4142135, 1.0, 16);
        match gap_integral_with(&params, 1e-6, true) {
            Err(GapError::AmbiguousRegion {
                critical_value,
                adjacent_value,
                ..
            }) => {
                assert!((critical_value - adjacent_value).abs() < 1e-6);
            }
            other => panic!("expected AmbiguousRegion, got {other:?}"),
        }
        // Non-strict mode snaps to the critical formula; the snap error is
        // bounded by the band half-width times the gap's a-derivative, so
        // a 1e-6 tolerance admits deviations of the same order.
        let snapped = gap_integral_with(&params, 1e-6, false).unwrap();
        let direct = gap_direct_sum(&params);
        assert!((snapped.value - direct).abs() / direct.abs() < 5e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bound_pairs_are_ordered(g in -2.0f64..2.0, d in -2.0f64..2.0, idx in 0usize..4) {
            let n = [8, 16, 32, 64][idx];
            let params = p(g, d, n);
            let rc = classify(&params, DEGENERACY_TOL);
            match rc.region {
                Region::Ising => {
                    let b = bounds_ising(&params).unwrap();
                    prop_assert!(b.lower <= b.upper);
                    prop_assert!(b.lower > 0.0);
                }
                Region::Paramagnetic
                    // Open-gap floor on the positive-sign branch. The margin
                    // above the floor is the bulk integral ~ a^(-N/2), which
                    // underflows f64 deep in the phase, so the testable form
                    // allows rounding-level equality.
                    if rc.sign_factor == 1 => {
                        let gap = gap_integral(&params).unwrap().value;
                        let floor = rc.g_max_sq.sqrt() - (1.0 + rc.g_min_sq).sqrt();
                        prop_assert!(gap > floor - 1e-12 * (1.0 + floor.abs()));
                    }
                _ => {}
            }
        }
    }
}
