//! Exact integer/rational helpers and a ~60-digit binary float for the
//! transcendental evaluators.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Binary float carried at [`HP_BITS`] bits of precision.
pub type Hp = FBig<HalfEven, 2>;

/// 200 bits is a little over 60 significant decimal digits.
pub const HP_BITS: usize = 200;

/// Digits printed for high-precision values.
pub const HP_DIGITS: usize = 50;

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn pow2(k: usize) -> BigUint {
    BigUint::one() << k
}

/// `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    ((n - k + 1) as u64..=n as u64).fold(BigUint::one(), |acc, f| acc * f)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn to_ibig(x: &BigInt) -> IBig {
    let (sign, bytes) = x.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}

pub fn hp_from_int(x: &BigInt) -> Hp {
    Hp::from(to_ibig(x)).with_precision(HP_BITS).value()
}

pub fn hp_from_ratio(r: &BigRational) -> Hp {
    hp_from_int(r.numer()) / hp_from_int(r.denom())
}

/// Exact binary value of an `f64`, then widened.
pub fn hp_from_f64(x: f64) -> Hp {
    Hp::try_from(x)
        .expect("finite input")
        .with_precision(HP_BITS)
        .value()
}

pub fn hp_to_f64(x: &Hp) -> f64 {
    x.to_f64().value()
}

pub fn hp_to_string(x: &Hp) -> String {
    if x.repr().significand() == &IBig::ZERO {
        return "0".to_string();
    }
    x.to_decimal().value().with_precision(HP_DIGITS).value().to_string()
}

/// Exact rational value of a finite `f64`.
pub fn ratio_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input")
}
