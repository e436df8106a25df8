//! Exact integer arithmetic for the Fourier coefficients and fixed-point
//! evaluation of their trigonometric sum.
//!
//! Every finite `f64` is a dyadic rational, so `α ± 1` and all coefficients
//! `C_j` are dyadic rationals too. They are stored as integer numerators over
//! a shared power-of-two denominator, which makes the identities `Σ C_j = 1`
//! and `Σ D_j = 1` hold exactly.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integers `num_j` with `C_j = num_j / 2^shift`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct DyadicCoefficients {
    pub numerators: Vec<BigInt>,
    pub shift: u64,
}

/// Splits a positive finite `f64` into `(m, s)` with `value = m / 2^s`, `s ≥ 0`.
fn dyadic_parts(value: f64) -> (BigInt, u64) {
    debug_assert!(value.is_finite() && value > 0.0);
    let bits = value.to_bits();
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let fraction = bits & ((1u64 << 52) - 1);
    let (mantissa, exp2) = if exponent == 0 {
        (fraction, -1074)
    } else {
        (fraction | (1u64 << 52), exponent - 1075)
    };
    if exp2 >= 0 {
        (BigInt::from(mantissa) << exp2 as usize, 0)
    } else {
        let tz = (mantissa.trailing_zeros() as i64).min(-exp2);
        (BigInt::from(mantissa >> tz), (-exp2 - tz) as u64)
    }
}

/// `C_j = (−1)^j binom(N, j) (α+1)^{N−j} (α−1)^j / 2^N`, exactly.
pub(crate) fn fourier_numerators(n: u32, alpha: f64) -> DyadicCoefficients {
    let (a, s) = dyadic_parts(alpha);
    let unit = BigInt::one() << s as usize;
    let plus = &a + &unit;
    let minus = &a - &unit;

    let n_us = n as usize;
    let mut plus_pows = Vec::with_capacity(n_us + 1);
    let mut minus_pows = Vec::with_capacity(n_us + 1);
    plus_pows.push(BigInt::one());
    minus_pows.push(BigInt::one());
    for k in 1..=n_us {
        plus_pows.push(&plus_pows[k - 1] * &plus);
        minus_pows.push(&minus_pows[k - 1] * &minus);
    }

    let mut binom = BigInt::one();
    let mut numerators = Vec::with_capacity(n_us + 1);
    for j in 0..=n_us {
        let mut term = &binom * &plus_pows[n_us - j] * &minus_pows[j];
        if j % 2 == 1 {
            term = -term;
        }
        numerators.push(term);
        binom = binom * BigInt::from(n_us - j) / BigInt::from(j + 1);
    }

    DyadicCoefficients {
        numerators,
        shift: (s + 1) * n as u64,
    }
}

/// `num / 2^shift` rounded to `f64`. Out-of-range magnitudes become ±∞ or 0.
pub(crate) fn scaled_to_f64(num: &BigInt, shift: i64) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let bits = num.bits() as i64;
    let (mantissa, dropped) = if bits > 64 {
        let drop = bits - 64;
        ((num.abs() >> drop as usize), drop)
    } else {
        (num.abs(), 0)
    };
    let m = mantissa.to_u64().expect("mantissa fits in 64 bits") as f64;
    let value = ldexp(m, dropped - shift);
    if num.sign() == Sign::Minus {
        -value
    } else {
        value
    }
}

/// Base-2 logarithm of `|num| / 2^shift`, accurate to a few ulps.
pub(crate) fn log2_magnitude(num: &BigInt, shift: i64) -> f64 {
    if num.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = num.bits() as i64;
    let top = scaled_to_f64(&num.abs(), bits - 1);
    top.log2() + (bits - 1 - shift) as f64
}

pub(crate) fn ldexp(mut value: f64, mut exp: i64) -> f64 {
    while exp > 1000 {
        value *= f64::from_bits(((1000 + 1023) as u64) << 52);
        exp -= 1000;
        if value.is_infinite() {
            return value;
        }
    }
    while exp < -1000 {
        value *= f64::from_bits(((-1000 + 1023) as u64) << 52);
        exp += 1000;
        if value == 0.0 {
            return value;
        }
    }
    value * f64::from_bits(((exp + 1023) as u64) << 52)
}

/// Complex fixed-point number `(re + i·im) / 2^bits`.
#[derive(Debug, Clone)]
pub(crate) struct Fixed {
    pub re: BigInt,
    pub im: BigInt,
    pub bits: u64,
}

impl Fixed {
    fn mul(&self, other: &Fixed) -> Fixed {
        debug_assert_eq!(self.bits, other.bits);
        let re = &self.re * &other.re - &self.im * &other.im;
        let im = &self.re * &other.im + &self.im * &other.re;
        Fixed {
            re: re >> self.bits as usize,
            im: im >> self.bits as usize,
            bits: self.bits,
        }
    }

    fn conj(&self) -> Fixed {
        Fixed {
            re: self.re.clone(),
            im: -&self.im,
            bits: self.bits,
        }
    }

    fn truncate(self, bits: u64) -> Fixed {
        let drop = (self.bits - bits) as usize;
        Fixed {
            re: self.re >> drop,
            im: self.im >> drop,
            bits,
        }
    }
}

/// `e^{ix}` to roughly `bits` fractional bits.
pub(crate) fn unit_phasor(x: f64, bits: u64) -> Fixed {
    if x == 0.0 {
        return Fixed {
            re: BigInt::one() << bits as usize,
            im: BigInt::zero(),
            bits,
        };
    }
    let (m, s) = dyadic_parts(x.abs());
    // halve the argument until |y| < 2^-10, then square back up
    let halvings = (x.abs().log2().ceil() as i64 + 10).max(0) as u64;
    let work = bits + halvings + 64;
    // y = x / 2^halvings scaled by 2^work
    let total_shift = work as i64 - s as i64 - halvings as i64;
    let mut y = if total_shift >= 0 {
        m << total_shift as usize
    } else {
        m >> (-total_shift) as usize
    };
    if x < 0.0 {
        y = -y;
    }

    let one = BigInt::one() << work as usize;
    let mut re = one.clone();
    let mut im = BigInt::zero();
    let mut term = one;
    let mut k: u64 = 1;
    loop {
        term = ((&term * &y) >> work as usize) / BigInt::from(k);
        if term.is_zero() {
            break;
        }
        match k % 4 {
            1 => im += &term,
            2 => re -= &term,
            3 => im -= &term,
            _ => re += &term,
        }
        k += 1;
    }

    let mut z = Fixed { re, im, bits: work };
    for _ in 0..halvings {
        z = z.mul(&z);
    }
    z.truncate(bits)
}

/// `Σ_j (num_j / 2^shift) · e^{i(N−2j)x}` with fixed-point phasors of
/// `bits` fractional bits; returns `(re, im)` rounded to `f64`.
pub(crate) fn fourier_sum(coeffs: &DyadicCoefficients, x: f64, bits: u64) -> (f64, f64) {
    let n = coeffs.numerators.len() - 1;
    let z = unit_phasor(x, bits);
    let step = {
        let zc = z.conj();
        zc.mul(&zc)
    };
    // z^N by repeated squaring
    let mut power = Fixed {
        re: BigInt::one() << bits as usize,
        im: BigInt::zero(),
        bits,
    };
    let mut base = z;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            power = power.mul(&base);
        }
        base = base.mul(&base);
        e >>= 1;
    }

    let mut acc_re = BigInt::zero();
    let mut acc_im = BigInt::zero();
    for (j, num) in coeffs.numerators.iter().enumerate() {
        if j > 0 {
            power = power.mul(&step);
        }
        acc_re += num * &power.re;
        acc_im += num * &power.im;
    }
    let total = (coeffs.shift + bits) as i64;
    (scaled_to_f64(&acc_re, total), scaled_to_f64(&acc_im, total))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_parts_roundtrip() {
        for v in [1.0, 3.0, 0.25, 1.1, 10.0, 16.0, 1e-300, 1e300] {
            let (m, s) = dyadic_parts(v);
            assert_eq!(scaled_to_f64(&m, s as i64), v);
        }
    }

    #[test]
    fn n2_alpha3_numerators() {
        let c = fourier_numerators(2, 3.0);
        let vals: Vec<f64> = c.numerators.iter().map(|n| scaled_to_f64(n, c.shift as i64)).collect();
        assert_eq!(vals, vec![4.0, -4.0, 1.0]);
    }

    #[test]
    fn numerators_sum_to_denominator() {
        for &alpha in &[1.0, 1.1, 2.0, 6.0, 10.0, 16.0, 3.7] {
            for n in (2..=32).step_by(2) {
                let c = fourier_numerators(n, alpha);
                let sum: BigInt = c.numerators.iter().sum();
                assert_eq!(sum, BigInt::one() << c.shift as usize);
            }
        }
    }

    #[test]
    fn phasor_matches_libm() {
        for &x in &[0.3, -1.7, 3.1, 1e-8, 25.0, -700.25] {
            let z = unit_phasor(x, 200);
            let re = scaled_to_f64(&z.re, 200);
            let im = scaled_to_f64(&z.im, 200);
            assert!((re - x.cos()).abs() < 1e-15, "{x}");
            assert!((im - x.sin()).abs() < 1e-15, "{x}");
            // |z|^2 = 1 to far beyond double precision
            let norm = &z.re * &z.re + &z.im * &z.im - (BigInt::one() << 400usize);
            assert!(norm.bits() < 220, "{x}: {}", norm.bits());
        }
    }

    #[test]
    fn ldexp_extremes() {
        assert_eq!(ldexp(1.0, 1023), f64::MAX / (2.0 - f64::EPSILON));
        assert_eq!(ldexp(1.0, 1024), f64::INFINITY);
        assert_eq!(ldexp(1.0, -1074), f64::from_bits(1));
        assert_eq!(ldexp(3.0, -2), 0.75);
    }
}
