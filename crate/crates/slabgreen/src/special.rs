//! Error-function family and the derivative sequences behind the image
//! coefficients.
//!
//! The building blocks are `erf`/`erfc`, the scaled complementary error
//! function `erfcx(x) = exp(x^2) erfc(x)`, the normalized derivative family
//! `F_k(x) = (1/k!) d^k/dx^k erfcx(x)`, the conductance-weighted variant
//! `beta_k = sqrt(pi) (2 lt)^(k+1) F_k(z/(2 sqrt(kappa t)) + lt)` with
//! `lt = lambda sqrt(kappa t)`, and exact binomial coefficients.
//!
//! `erfcx` is evaluated directly by rational approximations (never as
//! `exp(x^2) * erfc(x)`, which overflows near `x = 26`) so that arguments of
//! order 30 and far beyond stay finite. The `F_k` three-term recurrence
//! `F_k = (2/k)(F_{k-2} + x F_{k-1})` is run forward only where that
//! direction is stable; for positive arguments at high order the forward
//! error grows roughly like `eps * exp(2 x sqrt(2 k))`, so those cases
//! switch to the backward (Miller) direction with an adaptive starting
//! order. All functions here are pure and thread-safe.

use crate::error::{ensure_finite, Result, SlabError};
use crate::sum::CompensatedSum;
use std::sync::OnceLock;

/// Largest derivative order served by [`f_k`] and [`beta_k`].
pub const K_MAX: usize = 130;

/// Largest row of the exact integer binomial table.
pub const BINOMIAL_MAX_ROW: u32 = 64;

/// Largest row of the crate-internal floating-point binomial table.
/// 130 is close to the ceiling: the central entry of row 130 is about
/// 9.6e37, while row 132 would overflow u128.
pub(crate) const PASCAL_MAX_ROW: usize = 130;

pub(crate) const SQRT_PI: f64 = 1.772_453_850_905_516_f64;
pub(crate) const TWO_OVER_SQRT_PI: f64 = 1.128_379_167_095_512_6_f64;
const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3_f64;

// Rational-approximation coefficients (three intervals split at 0.46875 and
// 4). The last entry of each numerator array is the leading coefficient of
// the Horner form below.
const THRESHOLD: f64 = 0.46875;

const ERF_NUM: [f64; 5] = [
    3.1611237438705656,
    113.864154151050156,
    377.485237685302021,
    3209.37758913846947,
    0.185777706184603153,
];
const ERF_DEN: [f64; 4] = [
    23.6012909523441209,
    244.024637934444173,
    1282.61652607737228,
    2844.23683343917062,
];

const MID_NUM: [f64; 9] = [
    0.564188496988670089,
    8.88314979438837594,
    66.1191906371416295,
    298.635138197400131,
    881.95222124176909,
    1712.04761263407058,
    2051.07837782607147,
    1230.33935479799725,
    2.15311535474403846e-8,
];
const MID_DEN: [f64; 8] = [
    15.7449261107098347,
    117.693950891312499,
    537.181101862009858,
    1621.38957456669019,
    3290.79923573345963,
    4362.61909014324716,
    3439.36767414372164,
    1230.33935480374942,
];

const FAR_NUM: [f64; 6] = [
    0.305326634961232344,
    0.360344899949804439,
    0.125781726111229246,
    0.0160837851487422766,
    6.58749161529837803e-4,
    0.0163153871373020978,
];
const FAR_DEN: [f64; 5] = [
    2.56852019228982242,
    1.87295284992346047,
    0.527905102951428412,
    0.0605183413124413191,
    0.00233520497626869185,
];

/// `2 exp(x^2)` overflows past this point; the reflection formula for
/// negative arguments saturates there.
const ERFCX_NEG_LIMIT: f64 = -26.628;

fn erf_ratio(z: f64) -> f64 {
    ((((ERF_NUM[4] * z + ERF_NUM[0]) * z + ERF_NUM[1]) * z + ERF_NUM[2]) * z + ERF_NUM[3])
        / ((((z + ERF_DEN[0]) * z + ERF_DEN[1]) * z + ERF_DEN[2]) * z + ERF_DEN[3])
}

fn erfcx_mid(y: f64) -> f64 {
    ((((((((MID_NUM[8] * y + MID_NUM[0]) * y + MID_NUM[1]) * y + MID_NUM[2]) * y + MID_NUM[3])
        * y
        + MID_NUM[4])
        * y
        + MID_NUM[5])
        * y
        + MID_NUM[6])
        * y
        + MID_NUM[7])
        / ((((((((y + MID_DEN[0]) * y + MID_DEN[1]) * y + MID_DEN[2]) * y + MID_DEN[3]) * y
            + MID_DEN[4])
            * y
            + MID_DEN[5])
            * y
            + MID_DEN[6])
            * y
            + MID_DEN[7])
}

fn erfcx_far(y: f64) -> f64 {
    let z = 1.0 / (y * y);
    let ratio = z
        * (((((FAR_NUM[5] * z + FAR_NUM[0]) * z + FAR_NUM[1]) * z + FAR_NUM[2]) * z + FAR_NUM[3])
            * z
            + FAR_NUM[4])
        / (((((z + FAR_DEN[0]) * z + FAR_DEN[1]) * z + FAR_DEN[2]) * z + FAR_DEN[3]) * z
            + FAR_DEN[4]);
    (FRAC_1_SQRT_PI - ratio) / y
}

/// Splits `exp(-y^2)` as `exp(-y0^2) * exp(-(y - y0)(y + y0))` with `y0`
/// rounded to a multiple of 1/16, so the squared argument is formed exactly
/// and the tail factor has a tiny exponent.
fn exp_neg_square(y: f64) -> f64 {
    let y0 = (y * 16.0).trunc() / 16.0;
    (-y0 * y0).exp() * (-(y - y0) * (y + y0)).exp()
}

fn exp_pos_square(y: f64) -> f64 {
    let y0 = (y * 16.0).trunc() / 16.0;
    (y0 * y0).exp() * ((y - y0) * (y + y0)).exp()
}

pub(crate) fn erfcx_raw(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        let z = y * y;
        return z.exp() * (1.0 - x * erf_ratio(z));
    }
    let tail = if y <= 4.0 { erfcx_mid(y) } else { erfcx_far(y) };
    if x < 0.0 {
        if x < ERFCX_NEG_LIMIT {
            // 2 exp(x^2) is not representable; saturate as documented.
            return f64::MAX;
        }
        2.0 * exp_pos_square(x) - tail
    } else {
        tail
    }
}

pub(crate) fn erfc_raw(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        return 1.0 - x * erf_ratio(y * y);
    }
    let scaled = if y <= 4.0 { erfcx_mid(y) } else { erfcx_far(y) };
    let tail = scaled * exp_neg_square(y);
    if x < 0.0 {
        2.0 - tail
    } else {
        tail
    }
}

pub(crate) fn erf_raw(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        return x * erf_ratio(y * y);
    }
    if x < 0.0 {
        erfc_raw(-x) - 1.0
    } else {
        1.0 - erfc_raw(x)
    }
}

/// Complementary error function.
///
/// Relative error at most 1e-14 for `|x| <= 6`; beyond that the result
/// underflows gracefully with absolute error far below 1e-300.
pub fn erfc(x: f64) -> Result<f64> {
    ensure_finite(x, "erfc argument")?;
    Ok(erfc_raw(x))
}

/// Error function `erf(x) = 1 - erfc(x)`.
pub fn erf(x: f64) -> Result<f64> {
    ensure_finite(x, "erf argument")?;
    Ok(erf_raw(x))
}

/// Scaled complementary error function `exp(x^2) erfc(x)`.
///
/// Overflow-free for every representable `x >= 0` (it decays like
/// `1/(x sqrt(pi))`). Negative arguments use the reflection
/// `2 exp(x^2) - erfcx(-x)`, which loses relative accuracy as `2 exp(x^2)`
/// grows and saturates at `f64::MAX` below `x = -26.628`.
pub fn erfcx(x: f64) -> Result<f64> {
    ensure_finite(x, "erfcx argument")?;
    Ok(erfcx_raw(x))
}

/// Derivative family of the scaled complementary error function evaluated
/// at one argument: `values[j] = F_j(x)` for `j = 0..=k`.
///
/// `F_0 = erfcx`, and `F_j` alternates sign with parity: positive for even
/// `j`, negative for odd `j`, for every real `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct FSequence {
    /// Argument shared by every order.
    pub x: f64,
    /// `values[j] = F_j(x)`.
    pub values: Vec<f64>,
    /// Highest order contained in `values` (`values.len() == k + 1`).
    pub k: usize,
}

/// Exponent budget for the forward direction of the three-term recurrence.
///
/// The forward relative error grows like `eps * exp(2 x sqrt(2 k))`; capping
/// the exponent at 16 keeps the loss under ~1e-9 of an eps-multiple, and
/// measured worst-case error of the combined forward/backward scheme is
/// about 1e-14 for k <= 128.
const FORWARD_EXPONENT_CAP: f64 = 16.0;

/// Miller starting-order margin above the requested top order, doubled until
/// two consecutive runs agree.
const MILLER_START_EXTRA: usize = 32;
const MILLER_MAX_EXTRA: usize = 16384;
const MILLER_RESCALE_LIMIT: f64 = 1e250;
const MILLER_RESCALE: f64 = 1e-250;
const MILLER_AGREE_REL: f64 = 5e-15;

fn forward_is_stable(k: usize, x: f64) -> bool {
    x <= 0.0 || 2.0 * x * (2.0 * (k as f64 + 1.0)).sqrt() <= FORWARD_EXPONENT_CAP
}

fn f_forward(k: usize, x: f64) -> Vec<f64> {
    let e = erfcx_raw(x);
    let mut v = Vec::with_capacity(k + 1);
    v.push(e);
    if k >= 1 {
        v.push(2.0 * x * e - TWO_OVER_SQRT_PI);
        for j in 2..=k {
            let next = (2.0 / j as f64) * (v[j - 2] + x * v[j - 1]);
            v.push(next);
        }
    }
    v
}

fn sequences_agree(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b.iter()).all(|(&p, &q)| {
        let scale = p.abs().max(q.abs());
        scale == 0.0 || (p - q).abs() <= MILLER_AGREE_REL * scale
    })
}

/// Backward (Miller) evaluation of a three-term family.
///
/// Runs `y[j-2] = ((j/2) y[j] - scale*x*y[j-1]) / scale^2` downward from a
/// trial order, then normalizes so that `y[0]` matches `seed`. With
/// `scale = 1` this is the `F_j` recurrence; with `scale = 2*lt` it is the
/// weighted `beta_j` recurrence. The trial order is doubled until two
/// consecutive runs agree to near machine precision.
fn miller_backward(k_max: usize, x: f64, scale: f64, seed: f64) -> Result<Vec<f64>> {
    let scale_sq = scale * scale;
    let mut previous: Option<Vec<f64>> = None;
    let mut extra = MILLER_START_EXTRA;
    while extra <= MILLER_MAX_EXTRA {
        let top = k_max + extra;
        let mut y = vec![0.0_f64; top + 2];
        y[top] = 1.0;
        let mut j = top;
        while j >= 2 {
            let val = ((j as f64 / 2.0) * y[j] - scale * x * y[j - 1]) / scale_sq;
            if !val.is_finite() {
                return Err(SlabError::Overflow(format!(
                    "backward recurrence overflowed at order {j} (x = {x}, scale = {scale})"
                )));
            }
            y[j - 2] = val;
            if val.abs() > MILLER_RESCALE_LIMIT {
                for w in y[j - 2..].iter_mut() {
                    *w *= MILLER_RESCALE;
                }
            }
            j -= 1;
        }
        if y[0] != 0.0 && y[0].is_finite() {
            let norm = seed / y[0];
            let vals: Vec<f64> = y[..=k_max].iter().map(|w| w * norm).collect();
            if let Some(prev) = &previous {
                if sequences_agree(prev, &vals) {
                    return Ok(vals);
                }
            }
            previous = Some(vals);
        } else {
            previous = None;
        }
        extra *= 2;
    }
    Err(SlabError::PrecisionLoss(format!(
        "backward recurrence did not stabilize (x = {x}, scale = {scale})"
    )))
}

/// All orders `F_0(x) ..= F_k(x)` of the derivative family.
pub fn f_k(k: usize, x: f64) -> Result<FSequence> {
    if k > K_MAX {
        return Err(SlabError::Capacity(format!(
            "derivative order {k} exceeds the cap {K_MAX}"
        )));
    }
    ensure_finite(x, "f_k argument")?;
    let values = if forward_is_stable(k, x) {
        f_forward(k, x)
    } else {
        miller_backward(k, x, 1.0, erfcx_raw(x))?
    };
    Ok(FSequence { x, values, k })
}

/// How small the scale `2 lt` has to be before the plain product
/// `sqrt(pi) (2 lt)^(k+1) F_k` is used directly (every factor shrinks, so
/// the product is unconditionally safe there).
const PRODUCT_PATH_LIMIT: f64 = 1e-3;

fn beta_forward(k: usize, x: f64, two_lt: f64) -> Vec<f64> {
    let e = erfcx_raw(x);
    let mut v = Vec::with_capacity(k + 1);
    v.push(SQRT_PI * two_lt * e);
    if k >= 1 {
        v.push(two_lt * two_lt * 2.0 * (SQRT_PI * x * e - 1.0));
        for j in 2..=k {
            let next = (2.0 / j as f64) * (two_lt * two_lt * v[j - 2] + two_lt * x * v[j - 1]);
            v.push(next);
        }
    }
    v
}

/// All orders `beta_0 ..= beta_k` at one geometric argument.
///
/// `beta_j = sqrt(pi) (2 lt)^(j+1) F_j(z/(2 sqrt(kappa t)) + lt)` with
/// `lt = lambda sqrt(kappa t)`, propagated by scaled recurrences so the bare
/// power `(2 lt)^(j+1)` is never formed.
pub(crate) fn beta_seq(k: usize, z: f64, lambda: f64, t: f64, kappa: f64) -> Result<Vec<f64>> {
    if k > K_MAX {
        return Err(SlabError::Capacity(format!(
            "derivative order {k} exceeds the cap {K_MAX}"
        )));
    }
    ensure_finite(z, "z")?;
    ensure_finite(lambda, "lambda")?;
    ensure_finite(t, "t")?;
    ensure_finite(kappa, "kappa")?;
    if t <= 0.0 {
        return Err(SlabError::Domain(format!("t must be positive, got {t}")));
    }
    if kappa <= 0.0 {
        return Err(SlabError::Domain(format!("kappa must be positive, got {kappa}")));
    }
    if z < 0.0 {
        return Err(SlabError::Domain(format!(
            "z must be nonnegative (pass the image distance |Z|), got {z}"
        )));
    }
    if lambda < 0.0 {
        return Err(SlabError::Domain(format!("lambda must be nonnegative, got {lambda}")));
    }
    if lambda == 0.0 {
        return Ok(vec![0.0; k + 1]);
    }
    let root_kt = (kappa * t).sqrt();
    let lt = lambda * root_kt;
    let x = z / (2.0 * root_kt) + lt;
    if !x.is_finite() || !lt.is_finite() {
        return Err(SlabError::Overflow(format!(
            "scaled argument not representable (z = {z}, lambda = {lambda}, t = {t})"
        )));
    }
    let two_lt = 2.0 * lt;
    let values = if two_lt <= PRODUCT_PATH_LIMIT {
        let family = f_k(k, x)?;
        let mut power = SQRT_PI * two_lt;
        let mut out = Vec::with_capacity(k + 1);
        for f in family.values {
            out.push(power * f);
            power *= two_lt;
        }
        out
    } else if forward_is_stable(k, x) {
        beta_forward(k, x, two_lt)
    } else {
        miller_backward(k, x, two_lt, SQRT_PI * two_lt * erfcx_raw(x))?
    };
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(SlabError::Overflow(format!(
            "beta recurrence produced a non-finite value {bad} (x = {x}, scale = {two_lt})"
        )));
    }
    Ok(values)
}

/// Conductance-weighted derivative value
/// `beta_k = sqrt(pi) (2 lt)^(k+1) F_k(z/(2 sqrt(kappa t)) + lt)`.
pub fn beta_k(k: usize, z: f64, lambda: f64, t: f64, kappa: f64) -> Result<f64> {
    let seq = beta_seq(k, z, lambda, t, kappa)?;
    Ok(seq[k])
}

/// Exact binomial coefficient `C(m, j)`; rows are capped at 64 so every
/// value fits in `u64` (`C(64, 32)` is about 1.8e18).
pub fn binomial(m: u32, j: u32) -> Result<u64> {
    if j > m {
        return Err(SlabError::Domain(format!(
            "binomial requires j <= m, got m = {m}, j = {j}"
        )));
    }
    if m > BINOMIAL_MAX_ROW {
        return Err(SlabError::Capacity(format!(
            "binomial row {m} exceeds the exact-integer cap {BINOMIAL_MAX_ROW}"
        )));
    }
    let j = j.min(m - j) as u128;
    let m = m as u128;
    let mut acc: u128 = 1;
    for i in 0..j {
        // acc * (m - i) is always divisible by i + 1: the quotient is C(m, i+1).
        acc = acc * (m - i) / (i + 1);
    }
    Ok(acc as u64)
}

fn pascal_rows() -> &'static Vec<Vec<u128>> {
    static ROWS: OnceLock<Vec<Vec<u128>>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let mut rows: Vec<Vec<u128>> = Vec::with_capacity(PASCAL_MAX_ROW + 1);
        rows.push(vec![1]);
        for m in 1..=PASCAL_MAX_ROW {
            let prev = &rows[m - 1];
            let mut row = vec![1u128; m + 1];
            for j in 1..m {
                row[j] = prev[j - 1] + prev[j];
            }
            rows.push(row);
        }
        rows
    })
}

/// Binomial coefficient as `f64` for rows up to [`PASCAL_MAX_ROW`].
///
/// The image-coefficient sums need rows beyond the exact-`u64` cap (row
/// `2|n|` for image index `n`); `u128` Pascal addition stays exact up to
/// that row (`C(130, 65)` is about 9.6e37) and the conversion to `f64` is
/// the only rounding step.
pub(crate) fn binomial_f64(m: usize, j: usize) -> f64 {
    debug_assert!(m <= PASCAL_MAX_ROW && j <= m);
    pascal_rows()[m][j] as f64
}

/// Compensated dot product of binomial weights against a beta sequence:
/// `sum_k C(row, k+1) * beta[k]`, returning the value and the magnitude sum
/// used for cancellation accounting.
pub(crate) fn binomial_beta_sum(row: usize, betas: &[f64]) -> (f64, f64) {
    let mut acc = CompensatedSum::new();
    for (k, &b) in betas.iter().enumerate() {
        acc.add(binomial_f64(row, k + 1) * b);
    }
    (acc.value(), acc.magnitude())
}
