//! Composite Simpson rule on `[0, 1]`.

/// Nodes and weights of the composite Simpson rule with `panels` equal
/// subintervals of `[0, 1]`. An odd panel count is rounded up to even.
pub fn simpson_rule(panels: usize) -> (Vec<f64>, Vec<f64>) {
    let n = panels.max(2).next_multiple_of(2);
    let h = 1.0 / n as f64;
    let nodes = (0..=n).map(|i| i as f64 * h).collect();
    let weights = (0..=n)
        .map(|i| {
            let c = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * h / 3.0
        })
        .collect();
    (nodes, weights)
}

pub fn simpson<F: Fn(f64) -> f64>(f: F, panels: usize) -> f64 {
    let (nodes, weights) = simpson_rule(panels);
    nodes.iter().zip(&weights).map(|(&x, &w)| w * f(x)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_cubics() {
        let got = simpson(|x| 4.0 * x * x * x - 3.0 * x * x + 1.0, 2);
        assert!((got - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_one() {
        let (_, w) = simpson_rule(1001);
        assert_eq!(w.len(), 1003);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fourth_order_on_smooth_integrands() {
        let exact = 1.0 - (1.0f64).cos();
        let e1 = (simpson(f64::sin, 8) - exact).abs();
        let e2 = (simpson(f64::sin, 16) - exact).abs();
        assert!(e1 / e2 > 14.0);
    }
}
