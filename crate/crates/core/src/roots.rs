//! Scalar root finding: the quadratic formula in its cancellation-free form
//! and safeguarded Newton iteration on bracketed sign changes.

/// Real roots of `a t^2 + b t + c = 0`, ascending. Degenerates to the linear
/// case when `a == 0`. A double root is returned once.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { Vec::new() } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    if disc == 0.0 {
        return vec![-b / (2.0 * a)];
    }
    // signum(0.0) = 1, so q != 0 whenever disc > 0
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (r1, r2) = (q / a, c / q);
    if r1 <= r2 {
        vec![r1, r2]
    } else {
        vec![r2, r1]
    }
}

/// Intervals `[x_i, x_{i+1}]` of a uniform grid on `[lo, hi]` across which
/// `f` changes sign (or vanishes at the left end).
pub fn sign_change_brackets<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, cells: usize) -> Vec<(f64, f64)> {
    assert!(cells > 0 && lo < hi);
    let step = (hi - lo) / cells as f64;
    let mut out = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(x0);
    for i in 1..=cells {
        let x1 = if i == cells { hi } else { lo + i as f64 * step };
        let f1 = f(x1);
        if f0 == 0.0 || (f0.is_finite() && f1.is_finite() && f0 * f1 < 0.0) {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 {
        out.push((x0, x0));
    }
    out
}

/// Newton iteration kept inside a sign-change bracket; falls back to
/// bisection whenever the Newton step leaves the bracket or stalls.
pub fn safeguarded_newton<F, D>(f: F, df: D, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> Option<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa * fb > 0.0 {
        return None;
    }
    // orient so that f(a) < 0 < f(b)
    if fa > 0.0 {
        std::mem::swap(&mut a, &mut b);
    }
    let mut x = 0.5 * (a + b);
    let mut last_step = (b - a).abs();
    for _ in 0..max_iter {
        let fx = f(x);
        if fx == 0.0 {
            return Some(x);
        }
        if fx < 0.0 {
            a = x;
        } else {
            b = x;
        }
        let d = df(x);
        let newton = if d != 0.0 { x - fx / d } else { f64::NAN };
        let inside = newton.is_finite() && (newton - a) * (newton - b) < 0.0;
        let next = if inside && (newton - x).abs() < 0.5 * last_step {
            newton
        } else {
            0.5 * (a + b)
        };
        last_step = (next - x).abs();
        x = next;
        if last_step <= xtol * (1.0 + x.abs()) {
            return Some(x);
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_avoids_cancellation() {
        // roots 1e-9 and 1e9
        let r = quadratic_roots(1.0, -(1e9 + 1e-9), 1.0);
        assert_eq!(r.len(), 2);
        assert!((r[0] - 1e-9).abs() < 1e-24);
        assert!((r[1] - 1e9).abs() < 1e-6);
    }

    #[test]
    fn quadratic_edge_cases() {
        assert!(quadratic_roots(1.0, 0.0, 1.0).is_empty());
        assert_eq!(quadratic_roots(1.0, -2.0, 1.0), vec![1.0]);
        assert_eq!(quadratic_roots(0.0, 2.0, -1.0), vec![0.5]);
        assert_eq!(quadratic_roots(1.0, 0.0, -4.0), vec![-2.0, 2.0]);
    }

    #[test]
    fn newton_finds_cubic_roots_in_brackets() {
        let f = |x: f64| (x - 0.2) * (x - 0.5) * (x - 0.9);
        let df = |x: f64| (x - 0.5) * (x - 0.9) + (x - 0.2) * (x - 0.9) + (x - 0.2) * (x - 0.5);
        let brackets = sign_change_brackets(f, 0.0, 1.0, 97);
        assert_eq!(brackets.len(), 3);
        let roots: Vec<f64> = brackets
            .iter()
            .map(|&(a, b)| safeguarded_newton(f, df, a, b, 1e-15, 100).unwrap())
            .collect();
        for (r, e) in roots.iter().zip([0.2, 0.5, 0.9]) {
            assert!((r - e).abs() < 1e-14);
        }
    }

    #[test]
    fn newton_survives_zero_derivative() {
        // f'(0) = 0 at the bracket midpoint
        let r = safeguarded_newton(|x| x * x * x - 0.001, |x| 3.0 * x * x, -1.0, 1.0, 1e-15, 200).unwrap();
        assert!((r - 0.1).abs() < 1e-13);
    }
}
