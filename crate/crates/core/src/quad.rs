//! Globally adaptive Gauss-Kronrod (7/15) quadrature for complex integrands.
//!
//! Infinite limits are handled by mapping onto finite intervals, and
//! user breakpoints (pole positions, say) split the range before refinement.

#![allow(clippy::excessive_precision)]

use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evals: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { rel_tol: 1e-6, abs_tol: 0.0, max_intervals: 20_000 }
    }
}

struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        rk += s * WGK[j];
        if j % 2 == 1 {
            rg += s * WG[j / 2];
        }
    }
    let val = rk * h;
    let err = ((rk - rg) * h).norm();
    (val, err)
}

/// Integrates `f` over `[a, b]`, either end may be infinite. Breakpoints
/// outside the range are ignored.
pub fn integrate<F>(f: F, a: f64, b: f64, breakpoints: &[f64], opts: QuadOptions) -> QuadResult
where
    F: Fn(f64) -> Complex64,
{
    assert!(a < b, "empty integration range");
    let mut pts: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    pts.sort_by(|x, y| x.total_cmp(y));
    pts.dedup();
    // bounded edges of the finite core; tails are handled separately
    let first = pts.first().copied().unwrap_or(0.0);
    let last = pts.last().copied().unwrap_or(0.0);
    let lo = if a.is_finite() {
        a
    } else if b.is_finite() {
        first.min(b) - 1.0
    } else {
        first - 1.0
    };
    let hi = if b.is_finite() { b } else { last.max(lo) + 1.0 };

    let mut segs: Vec<(f64, f64, u8)> = Vec::new();
    if !a.is_finite() {
        segs.push((0.0, 1.0, 1));
    }
    let mut knots = vec![lo];
    knots.extend(pts.iter().copied().filter(|&x| x > lo && x < hi));
    knots.push(hi);
    for w in knots.windows(2) {
        segs.push((w[0], w[1], 0));
    }
    if !b.is_finite() {
        segs.push((0.0, 1.0, 2));
    }

    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut evals = 0;
    let mut converged = true;
    let nseg = segs.len();
    for (sa, sb, kind) in segs {
        let g = |t: f64| -> Complex64 {
            match kind {
                0 => f(t),
                // (-inf, lo]: x = lo - t/(1-t)
                1 => {
                    let s = 1.0 - t;
                    if s <= 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    f(lo - t / s) / (s * s)
                }
                _ => {
                    let s = 1.0 - t;
                    if s <= 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    f(hi + t / s) / (s * s)
                }
            }
        };
        let mut o = opts;
        o.max_intervals = (opts.max_intervals / nseg).max(50);
        let r = adapt(&g, sa, sb, o);
        total += r.value;
        err += r.error;
        evals += r.evals;
        converged &= r.converged;
    }
    let tol = opts.abs_tol.max(opts.rel_tol * total.norm());
    QuadResult { value: total, error: err, evals, converged: converged || err <= tol }
}

fn adapt<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, opts: QuadOptions) -> QuadResult {
    let (v, e) = kronrod(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, error: e });
    let mut total = v;
    let mut err = e;
    let mut evals = 15;
    loop {
        let tol = opts.abs_tol.max(opts.rel_tol * total.norm());
        if err <= tol {
            return QuadResult { value: total, error: err, evals, converged: true };
        }
        if heap.len() >= opts.max_intervals {
            return QuadResult { value: total, error: err, evals, converged: false };
        }
        let p = heap.pop().expect("non-empty heap");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // interval can no longer be split in floating point
            heap.push(Piece { error: 0.0, ..p });
            err -= p.error;
            continue;
        }
        let (v1, e1) = kronrod(f, p.a, m);
        let (v2, e2) = kronrod(f, m, p.b);
        evals += 30;
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Piece { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Piece { a: m, b: p.b, value: v2, error: e2 });
    }
}

/// Real-valued convenience wrapper.
pub fn integrate_real<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breakpoints: &[f64], opts: QuadOptions) -> (f64, f64) {
    let r = integrate(|x| Complex64::new(f(x), 0.0), a, b, breakpoints, opts);
    (r.value.re, r.error)
}
