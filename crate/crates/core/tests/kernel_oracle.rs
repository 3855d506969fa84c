//! Directed operations and error-free transforms against exact rational
//! arithmetic written here with `num-bigint`, independent of the crate's
//! own oracle.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use itlconform::fpkernel::{dir_op, next_down, next_up, two_prod, two_sum, ArithOp, Dir, Residual, MAXREAL};

const SAMPLES: usize = 100_000;

/// Exact rational `num / den` with `den > 0`.
#[derive(Clone, Debug)]
struct Q {
    num: BigInt,
    den: BigInt,
}

impl Q {
    fn of(x: f64) -> Q {
        assert!(x.is_finite());
        let bits = x.to_bits();
        let neg = bits >> 63 == 1;
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if e == 0 { (frac, -1074) } else { (frac | (1 << 52), e - 1075) };
        let mut num = BigInt::from(m);
        if neg {
            num = -num;
        }
        if e >= 0 {
            Q { num: num << e as usize, den: BigInt::from(1) }
        } else {
            Q { num, den: BigInt::from(1) << (-e) as usize }
        }
    }

    fn add(&self, o: &Q) -> Q {
        Q { num: &self.num * &o.den + &o.num * &self.den, den: &self.den * &o.den }
    }

    fn neg(&self) -> Q {
        Q { num: -&self.num, den: self.den.clone() }
    }

    fn mul(&self, o: &Q) -> Q {
        Q { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    fn div(&self, o: &Q) -> Q {
        let (mut num, mut den) = (&self.num * &o.den, &self.den * &o.num);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Q { num, den }
    }

    fn cmp(&self, o: &Q) -> Ordering {
        (&self.num * &o.den).cmp(&(&o.num * &self.den))
    }
}

/// Compares a binary64 value (possibly infinite) with an exact value.
fn cmp_f64(r: f64, v: &Q) -> Ordering {
    if r == f64::INFINITY {
        Ordering::Greater
    } else if r == f64::NEG_INFINITY {
        Ordering::Less
    } else {
        Q::of(r).cmp(v)
    }
}

/// `r` is the directed rounding of the exact value `v`.
fn is_directed_rounding(r: f64, v: &Q, dir: Dir) -> bool {
    match dir {
        Dir::Down => r != f64::INFINITY && cmp_f64(r, v).is_le() && cmp_f64(next_up(r), v).is_gt(),
        Dir::Up => r != f64::NEG_INFINITY && cmp_f64(r, v).is_ge() && cmp_f64(next_down(r), v).is_lt(),
    }
}

/// `r` is the directed rounding of `sqrt(a)` for finite `a >= 0`.
fn is_directed_sqrt(r: f64, a: f64, dir: Dir) -> bool {
    let a = Q::of(a);
    // For c >= 0, c <= sqrt(a) iff c^2 <= a.
    let below = |c: f64| c <= 0.0 || Q::of(c).mul(&Q::of(c)).cmp(&a).is_le();
    let above = |c: f64| c == f64::INFINITY || (c >= 0.0 && Q::of(c).mul(&Q::of(c)).cmp(&a).is_ge());
    match dir {
        Dir::Down => below(r) && !below(next_up(r)),
        Dir::Up => above(r) && (next_down(r) < 0.0 || !above(next_down(r))),
    }
}

/// Operands mixing wide, cancelling, subnormal and near-overflow values.
fn operand(rng: &mut ChaCha8Rng, partner: Option<f64>) -> f64 {
    loop {
        let x = match rng.random_range(0..10) {
            0..=3 => f64::from_bits(rng.random()),
            4 | 5 => match partner {
                // Close to +-partner, to force cancellation and ties.
                Some(p) if p.is_finite() => {
                    let k: i64 = rng.random_range(-4..=4);
                    let v = f64::from_bits(p.abs().to_bits().saturating_add_signed(k));
                    if rng.random() { -v } else { v }
                }
                _ => rng.random_range(-8.0..8.0),
            },
            6 => rng.random_range(-1000i32..1000) as f64 * 2f64.powi(rng.random_range(-60..60)),
            7 => f64::from_bits(rng.random_range(0..1u64 << 53)) * if rng.random() { 1.0 } else { -1.0 },
            8 => MAXREAL * rng.random_range(0.5..1.0) * if rng.random() { 1.0 } else { -1.0 },
            _ => [0.0, -0.0, 1.0, -1.0, MAXREAL, -MAXREAL, f64::MIN_POSITIVE][rng.random_range(0..7)],
        };
        if x.is_finite() {
            return x;
        }
    }
}

fn check_op(op: ArithOp, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for _ in 0..SAMPLES {
        let a = operand(&mut rng, None);
        let b = operand(&mut rng, Some(a));
        let c = operand(&mut rng, Some(a * b));
        let dir = if rng.random() { Dir::Down } else { Dir::Up };
        let ok = match op {
            ArithOp::Add => is_directed_rounding(dir_op(op, dir, &[a, b]), &Q::of(a).add(&Q::of(b)), dir),
            ArithOp::Sub => is_directed_rounding(dir_op(op, dir, &[a, b]), &Q::of(a).add(&Q::of(b).neg()), dir),
            ArithOp::Mul => is_directed_rounding(dir_op(op, dir, &[a, b]), &Q::of(a).mul(&Q::of(b)), dir),
            ArithOp::Div => b == 0.0 || is_directed_rounding(dir_op(op, dir, &[a, b]), &Q::of(a).div(&Q::of(b)), dir),
            ArithOp::Sqrt => {
                let a = a.abs();
                is_directed_sqrt(dir_op(op, dir, &[a]), a, dir)
            }
            ArithOp::Fma => {
                let exact = Q::of(a).mul(&Q::of(b)).add(&Q::of(c));
                is_directed_rounding(dir_op(op, dir, &[a, b, c]), &exact, dir)
            }
        };
        if !ok && bad.len() < 5 {
            bad.push((a, b, c, dir));
        }
    }
    assert!(bad.is_empty(), "{op:?}: {bad:?}");
}

#[test]
fn directed_add_matches_exact_rounding() {
    check_op(ArithOp::Add, 1);
}

#[test]
fn directed_sub_matches_exact_rounding() {
    check_op(ArithOp::Sub, 2);
}

#[test]
fn directed_mul_matches_exact_rounding() {
    check_op(ArithOp::Mul, 3);
}

#[test]
fn directed_div_matches_exact_rounding() {
    check_op(ArithOp::Div, 4);
}

#[test]
fn directed_sqrt_matches_exact_rounding() {
    check_op(ArithOp::Sqrt, 5);
}

#[test]
fn directed_fma_matches_exact_rounding() {
    check_op(ArithOp::Fma, 6);
}

#[test]
fn infinite_operands_follow_ieee() {
    let specials = [f64::INFINITY, f64::NEG_INFINITY, 0.0, -0.0, 1.5, -MAXREAL];
    for &a in &specials {
        for &b in &specials {
            if a.is_finite() && b.is_finite() {
                continue;
            }
            for dir in [Dir::Down, Dir::Up] {
                for (op, host) in [(ArithOp::Add, a + b), (ArithOp::Sub, a - b), (ArithOp::Mul, a * b), (ArithOp::Div, a / b)] {
                    let r = dir_op(op, dir, &[a, b]);
                    assert!(r == host || (r.is_nan() && host.is_nan()), "{op:?} {a} {b} {dir:?}: {r}");
                }
            }
        }
    }
}

#[test]
fn two_sum_is_error_free() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..SAMPLES {
        let a = operand(&mut rng, None);
        let b = operand(&mut rng, Some(a));
        let p = two_sum(a, b);
        assert_eq!(p.hi, a + b);
        if p.hi.is_finite() {
            let total = Q::of(p.hi).add(&Q::of(p.lo));
            assert!(total.cmp(&Q::of(a).add(&Q::of(b))).is_eq(), "two_sum({a:e}, {b:e}) = {p:?}");
        } else {
            assert!(p.lo.is_nan());
        }
    }
}

#[test]
fn two_prod_is_error_free_when_it_says_so() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut inexact = 0;
    for _ in 0..SAMPLES {
        let a = operand(&mut rng, None);
        let b = operand(&mut rng, None);
        let (p, status) = two_prod(a, b);
        assert_eq!(p.hi, a * b);
        if !p.hi.is_finite() {
            assert!(p.lo.is_nan() && status == Residual::Inexact);
            continue;
        }
        let residual = Q::of(a).mul(&Q::of(b)).add(&Q::of(p.hi).neg());
        match status {
            Residual::Exact => assert!(Q::of(p.lo).cmp(&residual).is_eq(), "two_prod({a:e}, {b:e}) = {p:?}"),
            Residual::Inexact => {
                inexact += 1;
                assert_eq!(p.lo.partial_cmp(&0.0), Some(residual.cmp(&Q::of(0.0))), "two_prod({a:e}, {b:e}) = {p:?}");
            }
        }
    }
    // Tiny products do occur in the mix.
    assert!(inexact > 0);
}
