use crate::error::{Error, Result};

/// Bessel function of the first kind, integer order m >= 0.
///
/// Absolute error <= 1e-12 for |x| <= 50. Negative arguments use the parity
/// J_m(-x) = (-1)^m J_m(x). For negative orders see [`bessel_j_signed`].
pub fn bessel_j(m: u32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("bessel_j argument must be finite, got {x}")));
    }
    let ax = x.abs();
    let v = if ax <= 12.0 { series_j(m, ax) } else { miller_j(m, ax) };
    // parity in the argument
    if x < 0.0 && m % 2 == 1 {
        Ok(-v)
    } else {
        Ok(v)
    }
}

/// Bessel J for signed integer order, via J_{-m}(x) = (-1)^m J_m(x).
pub fn bessel_j_signed(m: i32, x: f64) -> Result<f64> {
    let v = bessel_j(m.unsigned_abs(), x)?;
    if m < 0 && m.rem_euclid(2) == 1 {
        Ok(-v)
    } else {
        Ok(v)
    }
}

/// Ascending power series; accurate to ~4e-13 absolute for 0 <= x <= 12.
/// Terms are built by recurrence so no factorial overflows.
fn series_j(m: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0_f64;
    for i in 1..=m {
        term *= half / i as f64;
        if term == 0.0 {
            return 0.0; // underflow for very large order
        }
    }
    let mut sum = term;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= -(half * half) / (k as f64 * (m + k) as f64);
        sum += term;
        if k > 4 && term.abs() <= 1e-18 * sum.abs().max(1e-300) {
            break;
        }
        if k > 500 {
            break; // unreachable for x <= 12; defensive bound
        }
    }
    sum
}

/// Backward (Miller) recurrence with the normalization J_0 + 2*sum J_{2k} = 1.
/// Near machine precision for x > 12.
fn miller_j(m: u32, x: f64) -> f64 {
    let base = (x + 15.0 + 12.0 * x.cbrt()).ceil() as u32;
    let mut n_start = base.max(m + 20);
    if n_start % 2 == 1 {
        n_start += 1;
    }
    let mut j_next = 0.0_f64; // J_{k+1}
    let mut j_cur = 1e-30_f64; // J_k, seed at k = n_start
    let mut even_sum = 0.0_f64; // 2 * sum of J_{2j}, 2j >= 2
    let mut j_want = if m == n_start { j_cur } else { 0.0 };
    let mut k = n_start;
    while k > 0 {
        let j_prev = (2.0 * k as f64 / x) * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        k -= 1;
        if k == m {
            j_want = j_cur;
        }
        if k > 0 && k % 2 == 0 {
            even_sum += 2.0 * j_cur;
        }
        if j_cur.abs() > 1e250 {
            // rescale to avoid overflow; ratios are what matter
            j_cur *= 1e-250;
            j_next *= 1e-250;
            even_sum *= 1e-250;
            j_want *= 1e-250;
        }
    }
    j_want / (j_cur + even_sum)
}
