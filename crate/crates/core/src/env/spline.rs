//! Clamped cubic B-spline basis on `[0, 1]`.

use crate::error::{invalid, Result};

pub const CUBIC: usize = 3;

/// Knot vector with `n_interior` equally spaced interior knots on `(0, 1)` and
/// both boundary knots repeated `degree + 1` times.
pub fn clamped_uniform_knots(n_interior: usize, degree: usize) -> Vec<f64> {
    let mut knots = vec![0.0; degree + 1];
    let step = 1.0 / (n_interior + 1) as f64;
    knots.extend((1..=n_interior).map(|i| i as f64 * step));
    knots.extend(std::iter::repeat_n(1.0, degree + 1));
    knots
}

/// Number of basis functions spanned by `knots` at the given degree.
pub fn basis_len(knots: &[f64], degree: usize) -> usize {
    knots.len() - degree - 1
}

/// Values of every basis function at `x`, via the triangular de Boor
/// recurrence on the knot span containing `x`.
pub fn basis_values(knots: &[f64], degree: usize, x: f64) -> Result<Vec<f64>> {
    let n_basis = basis_len(knots, degree);
    let lo = knots[degree];
    let hi = knots[n_basis];
    if !(hi > lo) {
        return Err(invalid("degenerate knot vector"));
    }
    if !(lo..=hi).contains(&x) {
        return Err(invalid(format!("{x} outside the knot range [{lo}, {hi}]")));
    }
    let span = find_span(knots, degree, n_basis, x);

    let mut local = vec![0.0; degree + 1];
    let mut left = vec![0.0; degree + 1];
    let mut right = vec![0.0; degree + 1];
    local[0] = 1.0;
    for j in 1..=degree {
        left[j] = x - knots[span + 1 - j];
        right[j] = knots[span + j] - x;
        let mut saved = 0.0;
        for r in 0..j {
            let denom = right[r + 1] + left[j - r];
            let temp = if denom == 0.0 { 0.0 } else { local[r] / denom };
            local[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        local[j] = saved;
    }

    let mut out = vec![0.0; n_basis];
    for (k, v) in local.into_iter().enumerate() {
        out[span - degree + k] = v;
    }
    Ok(out)
}

fn find_span(knots: &[f64], degree: usize, n_basis: usize, x: f64) -> usize {
    if x >= knots[n_basis] {
        // right endpoint belongs to the last non-empty span
        let mut s = n_basis - 1;
        while s > degree && knots[s] == knots[s + 1] {
            s -= 1;
        }
        return s;
    }
    let mut low = degree;
    let mut high = n_basis;
    while high - low > 1 {
        let mid = (low + high) / 2;
        if x < knots[mid] {
            high = mid;
        } else {
            low = mid;
        }
    }
    low
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knot_layout() {
        let k = clamped_uniform_knots(10, CUBIC);
        assert_eq!(k.len(), 18);
        assert_eq!(&k[..4], &[0.0; 4]);
        assert_eq!(&k[14..], &[1.0; 4]);
        assert_eq!(basis_len(&k, CUBIC), 14);
    }

    #[test]
    fn endpoints_are_interpolatory() {
        let k = clamped_uniform_knots(10, CUBIC);
        let at0 = basis_values(&k, CUBIC, 0.0).unwrap();
        let at1 = basis_values(&k, CUBIC, 1.0).unwrap();
        assert_eq!(at0[0], 1.0);
        assert_eq!(at1[13], 1.0);
    }

    #[test]
    fn out_of_range_rejected() {
        let k = clamped_uniform_knots(2, CUBIC);
        assert!(basis_values(&k, CUBIC, 1.5).is_err());
    }
}
