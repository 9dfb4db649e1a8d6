//! One-dimensional maximisation: uniform grid scan followed by golden-section
//! refinement around the best grid cell.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// A maximiser and the objective value found there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`,
/// stopping once the bracket is narrower than `tol`.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Maximum {
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        Maximum { x: c, value: fc }
    } else {
        Maximum { x: d, value: fd }
    }
}

/// Scans `n ≥ 2` equally spaced points of `[lo, hi]`, then refines around the
/// best one with golden-section search.
///
/// The bracket endpoints and the best grid point are kept as candidates so a
/// maximum sitting on the boundary is returned exactly. Ties go to the smaller `x`.
/// Non-finite objective values count as `−∞`.
pub fn grid_then_golden_max<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    n: usize,
    tol: f64,
) -> Maximum {
    let n = n.max(2);
    if hi <= lo {
        return Maximum {
            x: lo,
            value: finite_or_neg_inf(f(lo)),
        };
    }
    let mut eval = |x: f64| finite_or_neg_inf(f(x));
    let step = (hi - lo) / (n - 1) as f64;
    let point = |k: usize| if k == n - 1 { hi } else { lo + step * k as f64 };

    let values: Vec<f64> = (0..n).map(|k| eval(point(k))).collect();
    let mut best_k = 0;
    for (k, &v) in values.iter().enumerate() {
        if v > values[best_k] {
            best_k = k;
        }
    }
    let mut best = Maximum {
        x: point(best_k),
        value: values[best_k],
    };

    let a = point(best_k.saturating_sub(1));
    let b = point((best_k + 1).min(n - 1));
    let refined = golden_section_max(&mut eval, a, b, tol);
    if refined.value > best.value {
        best = refined;
    }
    best
}

fn finite_or_neg_inf(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        f64::NEG_INFINITY
    }
}
