//! Adaptive Gauss-Kronrod quadrature.
//!
//! A 7-point Gauss / 15-point Kronrod pair drives an interval worklist; the
//! interval with the largest error estimate is bisected until the global
//! estimate meets the requested relative tolerance.  Integrands with an
//! integrable singularity at an endpoint are handled by splitting the interval
//! geometrically toward that endpoint first, so the adaptive stage only ever
//! sees panels on which the integrand is smooth.

use crate::error::Error;

// Kronrod nodes on [0, 1] by symmetry (positive half), and the matching
// Gauss-7 / Kronrod-15 weights.  Values from the standard QK15 tables.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Gauss-Kronrod 15 evaluation: returns `(kronrod, |kronrod - gauss|)`.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let (flo, fhi) = if x == 0.0 {
            let v = f(c);
            (v, 0.0)
        } else {
            (f(c - h * x), f(c + h * x))
        };
        let pair = flo + fhi;
        kronrod += wk * pair;
        // Odd Kronrod indices are the embedded Gauss-7 nodes.
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        } else if x == 0.0 {
            gauss += WG[3] * flo;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Which endpoint(s) of an integral carry an integrable singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SingularEnds {
    pub lower: bool,
    pub upper: bool,
}

impl SingularEnds {
    pub fn none() -> Self {
        Self::default()
    }
    pub fn lower() -> Self {
        Self { lower: true, upper: false }
    }
    pub fn upper() -> Self {
        Self { lower: false, upper: true }
    }
}

/// Default relative tolerance used by the tau charts.
pub const DEFAULT_REL_TOL: f64 = 1e-11;

/// Maximum number of panels the adaptive stage may create.
const MAX_PANELS: usize = 1 << 20;

/// Number of geometric layers peeled off toward a singular endpoint.  Layer k
/// has width `(b-a) * 2^{-k-1}`; 1100 layers reach a relative distance of
/// ~1e-331 from the endpoint, so even a barely integrable power like
/// `x^{-0.99}` leaves a truncation tail below 1e-6 of the total.
const GEOMETRIC_LAYERS: usize = 1100;

/// Integrate `f` over `[a, b]` (`a <= b`) to relative tolerance `rel_tol`.
///
/// Endpoints flagged in `ends` are approached through geometric layers; the
/// integrand is never evaluated exactly at a flagged endpoint.
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    ends: SingularEnds,
    rel_tol: f64,
) -> Result<f64, Error> {
    if a == b {
        return Ok(0.0);
    }
    assert!(a < b, "integrate expects a <= b");

    // Pre-split: geometric layers toward flagged endpoints, one body panel.
    // Layer contributions are accumulated as they are produced so the descent
    // can stop once further layers are provably negligible.
    let mut panels: Vec<(f64, f64, f64, f64)> = Vec::new();
    let width = b - a;
    let mut lo = a;
    let mut hi = b;
    let push = |panels: &mut Vec<(f64, f64, f64, f64)>, pa: f64, pb: f64| -> f64 {
        let (v, e) = gk15(f, pa, pb);
        panels.push((pa, pb, v, e));
        v
    };
    // Layer contributions of a power-type singularity form a geometric
    // sequence; when f64 cannot represent points any closer to the endpoint,
    // the remaining tail is extrapolated from the observed ratio instead of
    // being silently dropped.
    let descend = |panels: &mut Vec<(f64, f64, f64, f64)>, toward_upper: bool| {
        let mut edge = if toward_upper { b - width * 0.25 } else { a + width * 0.25 };
        let start = edge;
        let mut running = 0.0f64;
        let mut quiet = 0usize;
        let mut v_last: Option<f64> = None;
        let mut v_prev: Option<f64> = None;
        for _ in 0..GEOMETRIC_LAYERS {
            let inner = if toward_upper {
                b - (b - edge) * 0.5
            } else {
                a + (edge - a) * 0.5
            };
            // Stop while the layer coordinates still carry full precision:
            // within ~64 ulp of a finite endpoint (or the normal-number
            // floor near zero) the integrand argument is too quantized to
            // trust, and the extrapolated tail from the clean layers above
            // is more accurate than direct evaluation there.
            let wall = |endpoint: f64, dist: f64| {
                dist <= (64.0 * f64::EPSILON * endpoint.abs()).max(1e-305)
            };
            let stuck = if toward_upper {
                inner >= b || inner <= edge || wall(b, b - inner)
            } else {
                inner <= a || inner >= edge || wall(a, inner - a)
            };
            if stuck {
                // Representability wall: extrapolate the geometric tail from
                // the ratio of the last two layer contributions.
                if let (Some(last), Some(vp)) = (v_last, v_prev) {
                    if vp != 0.0 {
                        let rho = last / vp;
                        if rho.is_finite() && rho > 0.0 && rho < 0.995 {
                            let tail = last * rho / (1.0 - rho);
                            panels.push((edge, edge, tail, 0.0));
                        }
                    }
                }
                break;
            }
            let (pa, pb) = if toward_upper { (edge, inner) } else { (inner, edge) };
            let v = push(panels, pa, pb);
            running += v.abs();
            // Once several consecutive layers contribute below roundoff of
            // the accumulated magnitude, deeper layers cannot matter.
            if v.abs() <= 1e-17 * running.max(1e-300) {
                quiet += 1;
                if quiet >= 4 {
                    break;
                }
            } else {
                quiet = 0;
            }
            v_prev = v_last;
            v_last = Some(v);
            edge = inner;
        }
        start
    };
    if ends.lower {
        lo = descend(&mut panels, false);
    }
    if ends.upper {
        hi = descend(&mut panels, true);
    }
    if lo < hi {
        // Wide bodies (endpoints differing by orders of magnitude) start from
        // log-spaced seeds so the adaptive stage converges quickly.
        if lo > 0.0 && hi / lo > 100.0 {
            let decades = (hi / lo).log10().ceil() as usize;
            let mut a0 = lo;
            for k in 1..=decades.max(1) {
                let b0 = if k == decades { hi } else { lo * (hi / lo).powf(k as f64 / decades as f64) };
                if b0 > a0 {
                    push(&mut panels, a0, b0);
                }
                a0 = b0;
            }
        } else {
            push(&mut panels, lo, hi);
        }
    }
    // Priority queue on the error estimate: always bisect the worst panel.
    #[derive(PartialEq)]
    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
    }
    impl Eq for Panel {}
    impl PartialOrd for Panel {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Panel {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.error.total_cmp(&other.error)
        }
    }

    let mut heap: std::collections::BinaryHeap<Panel> = panels
        .into_iter()
        .map(|(a, b, value, error)| Panel { a, b, value, error })
        .collect();
    let mut total: f64 = heap.iter().map(|p| p.value).sum();
    let mut err: f64 = heap.iter().map(|p| p.error).sum();
    loop {
        let scale = total.abs().max(1e-300);
        if err <= rel_tol * scale || err <= 1e-300 {
            if !total.is_finite() {
                return Err(Error::QuadratureNoConvergence { a, b, estimate: total, error: err });
            }
            return Ok(total);
        }
        if heap.len() >= MAX_PANELS {
            return Err(Error::QuadratureNoConvergence { a, b, estimate: total, error: err });
        }
        let worst = heap.pop().expect("nonempty panel heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel no longer splittable in f64; accept its value as exact.
            err -= worst.error;
            heap.push(Panel { error: 0.0, ..worst });
            continue;
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
    }
}

/// Composite endpoint-graded rule used by the Hardy checks: `layers`
/// geometric layers toward `a` (each internally handled adaptively), so
/// integrands like `t^{-0.99}` still come out to near machine accuracy.
pub fn integrate_graded_lower<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<f64, Error> {
    integrate(f, a, b, SingularEnds::lower(), rel_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let f = |x: f64| 3.0 * x * x;
        let (v, _) = gk15(&f, 0.0, 2.0);
        assert_relative_eq!(v, 8.0, max_relative = 1e-14);
    }

    #[test]
    fn adaptive_handles_log_singularity() {
        // int_0^1 ln(1/x) dx = 1
        let f = |x: f64| -(x.ln());
        let v = integrate(&f, 0.0, 1.0, SingularEnds::lower(), 1e-12).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-11);
    }

    #[test]
    fn adaptive_handles_inverse_sqrt() {
        // int_0^1 x^{-1/2} dx = 2
        let f = |x: f64| x.powf(-0.5);
        let v = integrate(&f, 0.0, 1.0, SingularEnds::lower(), 1e-12).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-10);
    }

    #[test]
    fn strongly_singular_endpoint() {
        // int_0^1 x^{-0.98} dx = 50: the graded layers must dig deep enough.
        let f = |x: f64| x.powf(-0.98);
        let v = integrate_graded_lower(&f, 0.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(v, 50.0, max_relative = 1e-6);
    }

    #[test]
    fn upper_endpoint_singularity() {
        // int_0^1 (1-x)^{-1/2} dx = 2
        let f = |x: f64| (1.0 - x).powf(-0.5);
        let v = integrate(&f, 0.0, 1.0, SingularEnds::upper(), 1e-12).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-10);
    }

    #[test]
    fn oscillatory_body() {
        let f = |x: f64| (10.0 * x).sin();
        let v = integrate(&f, 0.0, 1.0, SingularEnds::none(), 1e-12).unwrap();
        assert_relative_eq!(v, (1.0 - (10.0f64).cos()) / 10.0, max_relative = 1e-12);
    }
}
