//! Merge algebra for two colliding progressions.
//!
//! A temporary progression `AP(v, ell)` collides with an active `AP(w, m)` when
//! `x·v = y·w (mod p)` for its first colliding coefficients `x` and `y`. With
//! `g = v/y = w/x` the sumset of the two progressions contains `F·g + AP(g, L)`
//! where `F = (x-1)(y-1)` if both coefficients exceed one and `0` otherwise.
//! [`represent`] turns a coefficient `t` of the merged progression back into
//! bounded coefficients `(alpha, beta)` of the two parents with
//! `alpha·y + beta·x = F + t`.

use crate::error::{Error, Result};
use crate::modmath::{ext_gcd, mod_inverse, mul_mod, Residue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MergeCase {
    /// `x = 1, y > 1`: the active side already has the merged direction.
    X1,
    /// `y = 1, x > 1`: the temporary side already has the merged direction.
    Y1,
    /// `x = y = 1`: both sides share a direction.
    XY1,
    /// `x, y > 1`.
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergePlan {
    pub x: u64,
    pub y: u64,
    /// Direction of the merged progression.
    pub g: Residue,
    pub f: u64,
    /// Untruncated merged length, saturated at `u64::MAX`.
    pub length: u64,
    pub ell: u64,
    pub m: u64,
    /// `y^{-1} mod x` when `x > 1`, otherwise 0.
    pub inv_y_mod_x: u64,
    pub case: MergeCase,
    /// `F·g mod p`, added to the sum of the two parent offsets.
    pub offset_delta: Residue,
}

impl MergePlan {
    /// Merged length capped at `p - 1`.
    pub fn truncated_length(&self, p: u64) -> u64 {
        self.length.min(p - 1)
    }

    /// `S = ell·y + m·x`, the upper end of the two-generator range.
    pub fn span(&self) -> u128 {
        self.ell as u128 * self.y as u128 + self.m as u128 * self.x as u128
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundedRep {
    pub alpha: u64,
    pub beta: u64,
}

pub fn make_merge_plan(
    v: Residue,
    ell: u64,
    w: Residue,
    m: u64,
    x: u64,
    y: u64,
    p: u64,
) -> Result<MergePlan> {
    if v == 0 || w == 0 || v >= p || w >= p {
        return Err(Error::invariant(format!(
            "merge directions must be nonzero residues mod {p} (v={v}, w={w})"
        )));
    }
    if x == 0 || x > ell || y == 0 || y > m {
        return Err(Error::invariant(format!(
            "collision coefficients out of range: x={x} ell={ell} y={y} m={m}"
        )));
    }
    if mul_mod(x, v, p) != mul_mod(y, w, p) {
        return Err(Error::invariant(format!("{x}·{v} != {y}·{w} (mod {p})")));
    }
    let (h, _, _) = ext_gcd(x, y);
    if h != 1 {
        return Err(Error::invariant(format!(
            "first collision has gcd({x}, {y}) = {h}"
        )));
    }

    let g = mul_mod(v, mod_inverse(y % p, p)?, p);
    debug_assert_eq!(g, mul_mod(w, mod_inverse(x % p, p)?, p));

    let (case, f, length) = match (x, y) {
        (1, 1) => (MergeCase::XY1, 0, ell as u128 + m as u128),
        (1, _) => (MergeCase::X1, 0, m as u128 + ell as u128 * y as u128),
        (_, 1) => (MergeCase::Y1, 0, ell as u128 + m as u128 * x as u128),
        _ => {
            let f = (x - 1) as u128 * (y - 1) as u128;
            let s = m as u128 * x as u128 + ell as u128 * y as u128;
            (MergeCase::General, f as u64, s - 2 * f)
        }
    };
    let inv_y_mod_x = if x > 1 { mod_inverse(y % x, x)? } else { 0 };

    Ok(MergePlan {
        x,
        y,
        g,
        f,
        length: u64::try_from(length).unwrap_or(u64::MAX),
        ell,
        m,
        inv_y_mod_x,
        case,
        offset_delta: mul_mod(f % p, g, p),
    })
}

/// Bounded coefficients for `F + t`, in constant time.
pub fn represent(plan: &MergePlan, t: u64) -> Result<BoundedRep> {
    if t > plan.length {
        return Err(Error::CoefficientOutOfRange {
            t,
            max: plan.length,
        });
    }
    let (x, y, ell, m) = (plan.x, plan.y, plan.ell, plan.m);
    let rep = match plan.case {
        MergeCase::X1 | MergeCase::XY1 => {
            let alpha = ell.min(t / y);
            BoundedRep {
                alpha,
                beta: t - alpha * y,
            }
        }
        MergeCase::Y1 => {
            let beta = m.min(t / x);
            BoundedRep {
                alpha: t - beta * x,
                beta,
            }
        }
        MergeCase::General => {
            let n = plan.f as u128 + t as u128;
            let a0 = ((n % x as u128) * plan.inv_y_mod_x as u128 % x as u128) as u64;
            let rest = n
                .checked_sub(a0 as u128 * y as u128)
                .ok_or_else(|| Error::invariant(format!("negative b0 for N={n}")))?;
            debug_assert_eq!(rest % x as u128, 0);
            let b0 = rest / x as u128;
            let k = if b0 <= m as u128 {
                0
            } else {
                (b0 - m as u128).div_ceil(y as u128)
            };
            let beta = b0
                .checked_sub(k * y as u128)
                .ok_or_else(|| Error::invariant(format!("negative beta for N={n}")))?;
            BoundedRep {
                alpha: (a0 as u128 + k * x as u128) as u64,
                beta: beta as u64,
            }
        }
    };
    if rep.alpha > ell || rep.beta > m {
        return Err(Error::invariant(format!(
            "representation ({}, {}) of t={t} exceeds bounds ({ell}, {m})",
            rep.alpha, rep.beta
        )));
    }
    Ok(rep)
}
