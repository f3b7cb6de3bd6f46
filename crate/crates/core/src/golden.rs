//! Golden-section search for unimodal one-dimensional problems.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Result of a one-dimensional search: the best point evaluated and its value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineOptimum {
    pub x: f64,
    pub value: f64,
}

/// Maximizes `f` over `[lo, hi]`, assuming it is unimodal there.
///
/// Stops after `max_iters` shrink steps or once the bracket is narrower than
/// `width_tol`. Returns the best interior point evaluated, which is at least
/// as good as every point the search looked at.
pub fn maximize<E>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    lo: f64,
    hi: f64,
    max_iters: usize,
    width_tol: f64,
) -> Result<LineOptimum, E> {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut best = if fc >= fd {
        LineOptimum { x: c, value: fc }
    } else {
        LineOptimum { x: d, value: fd }
    };
    for _ in 0..max_iters {
        if b - a <= width_tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
            if fc > best.value {
                best = LineOptimum { x: c, value: fc };
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
            if fd > best.value {
                best = LineOptimum { x: d, value: fd };
            }
        }
    }
    Ok(best)
}

/// Minimizes `f` over `[lo, hi]`; see [`maximize`].
pub fn minimize<E>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    lo: f64,
    hi: f64,
    max_iters: usize,
    width_tol: f64,
) -> Result<LineOptimum, E> {
    let best = maximize(|x| f(x).map(|v| -v), lo, hi, max_iters, width_tol)?;
    Ok(LineOptimum {
        x: best.x,
        value: -best.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    #[test]
    fn finds_parabola_vertex() {
        let opt = maximize(|x| Ok::<_, Infallible>(-(x - 0.3) * (x - 0.3) + 2.0), -1.0, 1.0, 200, 1e-12).unwrap();
        assert!((opt.x - 0.3).abs() < 1e-6);
        assert!((opt.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn finds_kink_minimum() {
        let opt = minimize(|x| Ok::<_, Infallible>((x - 0.7).abs()), 0.0, 1.0, 200, 1e-12).unwrap();
        assert!(opt.value < 1e-11);
    }

    #[test]
    fn zero_iterations_still_evaluates_two_points() {
        let mut calls = 0;
        let _ = maximize(
            |x| {
                calls += 1;
                Ok::<_, Infallible>(x)
            },
            0.0,
            1.0,
            0,
            0.0,
        );
        assert_eq!(calls, 2);
    }

    #[test]
    fn propagates_errors() {
        let r = maximize(|_| Err::<f64, _>("boom"), 0.0, 1.0, 10, 0.0);
        assert_eq!(r.unwrap_err(), "boom");
    }
}
