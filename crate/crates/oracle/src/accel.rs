//! Sequence acceleration for partial sums of slowly convergent series.

/// Limit estimate produced by an accelerator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accelerated {
    pub value: f64,
    /// Difference between the two best consecutive transforms.
    pub error: f64,
}

/// Neumaier-compensated sum; the result does not depend on how the terms
/// were produced, only on their order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Levin u-transform of a sequence of partial sums.
///
/// Handles both alternating series and monotone series whose terms decay
/// algebraically, which covers the between-zeros sums of sinc-type
/// integrands.
pub fn levin_u(partial_sums: &[f64]) -> Option<Accelerated> {
    const MAX_ORDER: usize = 40;
    let n = partial_sums.len();
    if n < 3 {
        return None;
    }
    let terms: Vec<f64> =
        (0..n).map(|j| if j == 0 { partial_sums[0] } else { partial_sums[j] - partial_sums[j - 1] }).collect();
    if terms.iter().any(|t| *t == 0.0 || !t.is_finite()) {
        return None;
    }

    let mut estimates = Vec::new();
    for k in 1..n.min(MAX_ORDER + 1) {
        let mut num = 0.0;
        let mut den = 0.0;
        let mut binom = 1.0_f64;
        for j in 0..=k {
            let scale = ((1.0 + j as f64) / (1.0 + k as f64)).powi(k as i32 - 1);
            let omega = (1.0 + j as f64) * terms[j];
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let c = sign * binom * scale / omega;
            num += c * partial_sums[j];
            den += c;
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        let v = num / den;
        if v.is_finite() {
            estimates.push(v);
        }
    }
    best_of(&estimates)
}

/// Repeated pairwise averaging of partial sums. Each sweep halves the
/// oscillation of an alternating sequence; `depth` sweeps are applied to the
/// tail of the sequence.
pub fn iterated_average(partial_sums: &[f64], depth: usize) -> Option<Accelerated> {
    if partial_sums.len() < depth + 2 || depth == 0 {
        return None;
    }
    let mut row = partial_sums.to_vec();
    for _ in 0..depth {
        row = row.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    let m = row.len();
    Some(Accelerated { value: row[m - 1], error: (row[m - 1] - row[m - 2]).abs() })
}

fn best_of(estimates: &[f64]) -> Option<Accelerated> {
    if estimates.len() < 2 {
        return None;
    }
    let mut best: Option<Accelerated> = None;
    for k in 1..estimates.len() {
        let err = (estimates[k] - estimates[k - 1]).abs();
        let candidate = Accelerated { value: estimates[k], error: err };
        match best {
            Some(b) if b.error <= err => {}
            _ => best = Some(candidate),
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn partial_sums(terms: impl Iterator<Item = f64>) -> Vec<f64> {
        let mut s = 0.0;
        terms
            .map(|t| {
                s += t;
                s
            })
            .collect()
    }

    #[test]
    fn levin_sums_leibniz_series() {
        let sums = partial_sums((0..20).map(|n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign / (2 * n + 1) as f64
        }));
        let acc = levin_u(&sums).unwrap();
        assert!((acc.value - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn levin_sums_basel_series() {
        let sums = partial_sums((1..30).map(|n| 1.0 / (n * n) as f64));
        let acc = levin_u(&sums).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        assert!((acc.value - exact).abs() < 1e-9, "{}", acc.value - exact);
    }

    #[test]
    fn averaging_on_alternating_harmonic() {
        let sums = partial_sums((1..40).map(|n| {
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            sign / n as f64
        }));
        let acc = iterated_average(&sums, 20).unwrap();
        assert!((acc.value - std::f64::consts::LN_2).abs() < 1e-8);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let terms = [1e16, 1.0, -1e16];
        assert_eq!(compensated_sum(terms), 1.0);
    }
}
