//! One-dimensional kernels: golden-section minimization of convex functions
//! and bracketed bisection for sign changes.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimizer and minimum of a convex `f` on `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub arg: f64,
    pub value: f64,
}

/// Golden-section search on a convex function, shrinking the bracket to
/// `width`. Ties keep the minimizer inside the bracket because `f` is convex,
/// so piecewise-linear (polyhedral) functions are handled too.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, width: f64) -> Minimum {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = Minimum {
        arg: a,
        value: f(a),
    };
    let fb = f(b);
    if fb < best.value {
        best = Minimum { arg: b, value: fb };
    }
    // 200 iterations shrink any finite bracket far below f64 resolution.
    for _ in 0..200 {
        if b - a <= width {
            break;
        }
        if fc <= fd {
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
    for (t, v) in [(c, fc), (d, fd)] {
        if v < best.value {
            best = Minimum { arg: t, value: v };
        }
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    if fm < best.value {
        best = Minimum {
            arg: mid,
            value: fm,
        };
    }
    best
}

/// Bisection on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs
/// (or one is zero). Stops on an exact zero or when the bracket can no
/// longer shrink.
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Option<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if !fm.is_finite() {
            return None;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// First sign change of `f` on a uniform grid of `steps` cells over
/// `[lo, hi]`, refined by bisection.
pub fn first_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, steps: usize) -> Option<f64> {
    let steps = steps.max(1);
    let h = (hi - lo) / steps as f64;
    let mut a = lo;
    let mut fa = f(a);
    if fa == 0.0 {
        return Some(a);
    }
    for k in 1..=steps {
        let b = if k == steps { hi } else { lo + h * k as f64 };
        let fb = f(b);
        if fb == 0.0 || fa.signum() != fb.signum() {
            return bisect(&f, a, b);
        }
        a = b;
        fa = fb;
    }
    None
}
