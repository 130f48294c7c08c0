//! Derivatives of Laplace transforms by Richardson-extrapolated central
//! differences (Ridders' tableau), so any scenario transform can be
//! differentiated without a symbolic form.

use crate::error::{domain, Result};

pub const MAX_ORDER: usize = 8;

/// Ridders step reduction factor and tableau size.
const CON: f64 = 1.4;
const NTAB: usize = 12;
const SAFE: f64 = 2.0;

/// n-th central difference quotient with step h.
fn central<F: FnMut(f64) -> Result<f64>>(f: &mut F, order: usize, z: f64, h: f64) -> Result<f64> {
    let n = order as f64;
    let mut sum = 0.0;
    let mut binom = 1.0;
    for k in 0..=order {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * f(z + (0.5 * n - k as f64) * h)?;
        binom = binom * (n - k as f64) / (k as f64 + 1.0);
    }
    Ok(sum / h.powi(order as i32))
}

/// d^order f / dz^order at z > 0.
///
/// Order 0 returns `f(z)` itself. The initial step keeps every stencil point
/// inside [0.2z, 1.8z], matching the relative scale on which Laplace
/// transforms vary, and shrinks further by |ln f(z)| when f is far below
/// one — there ln f ≈ −c z^δ changes by O(|ln f|) over that range.
pub fn lt_derivative<F: FnMut(f64) -> Result<f64>>(mut f: F, order: usize, z: f64) -> Result<f64> {
    if order > MAX_ORDER {
        return Err(domain(format!("derivative order {order} exceeds the supported maximum {MAX_ORDER}")));
    }
    if order == 0 {
        return f(z);
    }
    if !(z > 0.0 && z.is_finite()) {
        return Err(domain(format!("Laplace-transform derivatives are taken at z > 0, got {z}")));
    }
    let f0 = f(z)?;
    let decades = if f0 > 0.0 && f0 < 1.0 { (-f0.ln()).max(1.0) } else { 1.0 };
    let mut h = 1.6 * z / (order as f64 * decades);
    let mut table = [[0.0f64; NTAB]; NTAB];
    table[0][0] = central(&mut f, order, z, h)?;
    let mut best = table[0][0];
    let mut err = f64::INFINITY;
    for i in 1..NTAB {
        h /= CON;
        table[0][i] = central(&mut f, order, z, h)?;
        let mut fac = CON * CON;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
            fac *= CON * CON;
            let e = (table[j][i] - table[j - 1][i])
                .abs()
                .max((table[j][i] - table[j - 1][i - 1]).abs());
            if e <= err {
                err = e;
                best = table[j][i];
            }
        }
        if (table[i][i] - table[i - 1][i - 1]).abs() >= SAFE * err {
            break;
        }
    }
    Ok(best)
}
