//! Enclosures of pi and ln 2, computed once at a fixed high precision and
//! rounded outward on request.

use std::sync::OnceLock;

use super::bigfloat::BigFloat;
use super::bounds::{negligible, Bounds};

/// Precision of the cached tables.
pub const TABLE_BITS: u64 = 16384;

static PI: OnceLock<Bounds> = OnceLock::new();
static LN2: OnceLock<Bounds> = OnceLock::new();

/// `atan(1/n)` by its alternating series.
fn atan_inv(n: u64, w: u64) -> Bounds {
    let n2 = n * n;
    let mut power = Bounds::from_i64(1).div_int(n, w);
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power = power.div_int(n2, w);
        let term = power.div_int(2 * k + 1, w);
        sum = if k % 2 == 1 { sum.sub(&term, w) } else { sum.add(&term, w) };
        if negligible(&power, -(n.ilog2() as i64) - 1, w) {
            break;
        }
        k += 1;
    }
    // The alternating tail is bounded by the next term, itself below `power`.
    sum.widen(&power.hi, w)
}

fn compute_pi(w: u64) -> Bounds {
    let a = atan_inv(5, w).mul_pow2(4);
    let b = atan_inv(239, w).mul_pow2(2);
    a.sub(&b, w)
}

fn compute_ln2(w: u64) -> Bounds {
    // ln 2 = 2 atanh(1/3) = 2 * sum 1/((2k+1) 3^(2k+1)).
    let mut power = Bounds::from_i64(1).div_int(3, w);
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power = power.div_int(9, w);
        let term = power.div_int(2 * k + 1, w);
        sum = sum.add(&term, w);
        if negligible(&power, -2, w) {
            break;
        }
        k += 1;
    }
    // Positive tail: sum_{j>k} 3^-(2j+1) < power / 8.
    let tail = Bounds::new(BigFloat::ZERO, power.hi.clone());
    sum.add(&tail, w).mul_pow2(1)
}

fn outward(table: &Bounds, w: u64) -> Option<Bounds> {
    (w + 16 <= TABLE_BITS).then(|| table.round(w))
}

/// Enclosure of pi at `w` bits, or `None` beyond the table precision.
pub fn pi(w: u64) -> Option<Bounds> {
    outward(PI.get_or_init(|| compute_pi(TABLE_BITS + 32)), w)
}

/// Enclosure of ln 2 at `w` bits, or `None` beyond the table precision.
pub fn ln2(w: u64) -> Option<Bounds> {
    outward(LN2.get_or_init(|| compute_ln2(TABLE_BITS + 32)), w)
}
