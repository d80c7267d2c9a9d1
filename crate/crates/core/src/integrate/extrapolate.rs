//! Limit extrapolation for regularization schedules and slowly convergent
//! partial sums.

use crate::scalar::C64;

/// An extrapolated limit together with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: C64,
    pub error: f64,
}

/// Neville table for polynomial extrapolation of `values[k] ≈ v(h_k)` to
/// `h = 0`. Returns, for every prefix of the schedule, the best entry so far
/// (smallest error estimate among columns `≤ depth`).
pub fn richardson_prefixes(hs: &[f64], values: &[C64], depth: usize) -> Vec<Estimate> {
    let n = values.len().min(hs.len());
    let mut table: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut best: Option<Estimate> = None;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut row = vec![values[k]];
        for j in 1..=k.min(depth) {
            let hk = hs[k];
            let hkj = hs[k - j];
            let t = (row[j - 1] * hkj - table[k - 1][j - 1] * hk) / (hkj - hk);
            row.push(t);
        }
        for j in 0..row.len() {
            if k == 0 {
                continue;
            }
            let mut err = 0.0_f64;
            if j > 0 {
                err = err.max((row[j] - row[j - 1]).norm());
            }
            if j < table[k - 1].len() {
                err = err.max((row[j] - table[k - 1][j]).norm());
            }
            let cand = Estimate { value: row[j], error: err };
            if cand.value.re.is_finite() && cand.value.im.is_finite() && best.is_none_or(|b| cand.error <= b.error) {
                best = Some(cand);
            }
        }
        table.push(row);
        out.push(best.unwrap_or(Estimate { value: values[0], error: f64::INFINITY }));
    }
    out
}

/// Wynn's epsilon algorithm on a sequence of partial sums. Returns the
/// even-column entry whose last two members agree best.
pub fn wynn_epsilon(sums: &[C64]) -> Option<Estimate> {
    let n = sums.len();
    if n < 3 {
        return None;
    }
    let mut prev: Vec<C64> = vec![C64::new(0.0, 0.0); n + 1];
    let mut cur: Vec<C64> = sums.to_vec();
    let mut best: Option<Estimate> = None;
    let mut col = 0;
    while cur.len() >= 2 {
        if col % 2 == 0 && cur.len() >= 2 {
            let m = cur.len();
            let cand = Estimate { value: cur[m - 1], error: (cur[m - 1] - cur[m - 2]).norm() };
            if cand.value.re.is_finite() && best.is_none_or(|b| cand.error < b.error) {
                best = Some(cand);
            }
            if cand.error == 0.0 {
                break;
            }
        }
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d.norm() == 0.0 {
                return best;
            }
            next.push(prev[i + 1] + C64::new(1.0, 0.0) / d);
        }
        prev = cur;
        cur = next;
        col += 1;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn richardson_removes_polynomial_error() {
        let hs: Vec<f64> = (0..6).map(|k| 0.5_f64.powi(k)).collect();
        let vals: Vec<C64> = hs.iter().map(|h| c(2.0 + 3.0 * h - h * h + 0.5 * h * h * h)).collect();
        let est = richardson_prefixes(&hs, &vals, 4);
        let last = est.last().unwrap();
        assert!((last.value.re - 2.0).abs() < 1e-12, "{last:?}");
    }

    #[test]
    fn wynn_sums_leibniz() {
        let mut s = 0.0;
        let sums: Vec<C64> = (0..25)
            .map(|k| {
                s += if k % 2 == 0 { 4.0 } else { -4.0 } / (2 * k + 1) as f64;
                c(s)
            })
            .collect();
        let est = wynn_epsilon(&sums).unwrap();
        assert!((est.value.re - std::f64::consts::PI).abs() < 1e-12);
        assert!(est.error < 1e-10);
    }
}
