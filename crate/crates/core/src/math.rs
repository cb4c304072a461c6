//! Floating-point helpers on top of `libm`, usable without `std`.

/// Base-2 logarithm; `log2(0) = -inf`.
#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub fn exp2(x: f64) -> f64 {
    libm::exp2(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// `-x log2 x` with the convention `0 log 0 = 0`.
#[inline]
pub fn neg_xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        -x * log2(x)
    } else {
        0.0
    }
}

/// `log2(sum_i 2^{v_i})`, stable for large magnitudes. Returns `-inf` when
/// every term is `-inf` (or the slice is empty).
pub fn log2_sum_exp2<I: IntoIterator<Item = f64> + Clone>(values: I) -> f64 {
    let max = values.clone().into_iter().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    if max == f64::INFINITY {
        return max;
    }
    let sum: f64 = values.into_iter().map(|v| exp2(v - max)).sum();
    max + log2(sum)
}

/// Upper tail of the standard normal distribution, `Pr(Z > z)`.
#[inline]
pub fn normal_q(z: f64) -> f64 {
    0.5 * libm::erfc(z / core::f64::consts::SQRT_2)
}

/// `Pr(lo < Z <= hi)` for a standard normal `Z`, computed on the tail that
/// keeps the difference well conditioned.
pub fn normal_interval(lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    if lo >= 0.0 {
        normal_q(lo) - normal_q(hi)
    } else if hi <= 0.0 {
        normal_q(-hi) - normal_q(-lo)
    } else {
        1.0 - normal_q(-lo) - normal_q(hi)
    }
}
