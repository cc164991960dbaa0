//! One-dimensional quadrature: adaptive Simpson with width-proportional error
//! budgeting, a fixed-panel composite rule for convergence checks, and a
//! cumulative-integral table for repeated evaluation of antiderivatives.

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

/// Adaptive Simpson on `[a, b]` with absolute tolerance `tol`.
///
/// Classic bisection scheme: a subinterval is accepted when the two-panel
/// refinement agrees with the one-panel estimate to `15 x` its share of the
/// tolerance, and the Richardson correction is folded in.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    adaptive_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Composite Simpson with `n` panels (`n` even). Used as the independent
/// fixed-grid route when cross-checking the adaptive result.
pub fn composite_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    assert!(n >= 2 && n % 2 == 0, "composite_simpson: n must be even");
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Precomputed antiderivative `F(x) = integral of f over [a, x]`.
///
/// Build performs one adaptive pass over `[a, b]` and stores the accepted
/// breakpoints with prefix sums; `eval` finishes with a single Simpson panel
/// on the residual sub-interval, which is strictly finer than the accepted
/// resolution. Intended for kernels queried many times at scattered points.
pub struct CumulativeIntegral {
    xs: Vec<f64>,
    prefix: Vec<f64>,
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl CumulativeIntegral {
    pub fn build<F>(f: F, a: f64, b: f64, tol: f64) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::build_seeded(f, a, b, tol, 1)
    }

    /// `build` with the domain pre-split into `n_seed` uniform panels, each
    /// carrying a length-proportional share of the tolerance. Use when the
    /// integrand has a known oscillation scale: top-down bisection can alias
    /// an oscillation spanning many periods past the refinement check, while
    /// panels at most a period wide cannot.
    pub fn build_seeded<F>(f: F, a: f64, b: f64, tol: f64, n_seed: usize) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        assert!(b > a, "CumulativeIntegral: empty domain");
        assert!(n_seed >= 1, "CumulativeIntegral: n_seed must be >= 1");
        let mut xs = vec![a];
        let mut prefix = vec![0.0];
        let h = (b - a) / n_seed as f64;
        let tol_panel = tol / n_seed as f64;
        for i in 0..n_seed {
            let lo = a + h * i as f64;
            let hi = if i + 1 == n_seed { b } else { a + h * (i + 1) as f64 };
            let m = 0.5 * (lo + hi);
            let (fa, fm, fb) = (f(lo), f(m), f(hi));
            let whole = simpson(fa, fm, fb, hi - lo);
            build_step(&f, lo, hi, fa, fm, fb, whole, tol_panel, 50, &mut xs, &mut prefix);
        }
        CumulativeIntegral {
            xs,
            prefix,
            f: Box::new(f),
        }
    }

    /// Domain upper endpoint value, `F(b)`.
    pub fn total(&self) -> f64 {
        *self.prefix.last().unwrap()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    /// Evaluate `F(x)`. `x` must lie inside the build domain.
    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = self.domain();
        assert!(
            x >= a && x <= b,
            "CumulativeIntegral: x = {x} outside [{a}, {b}]"
        );
        // last breakpoint <= x
        let i = match self.xs.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
            Ok(i) => return self.prefix[i],
            Err(i) => i - 1,
        };
        let x0 = self.xs[i];
        let m = 0.5 * (x0 + x);
        self.prefix[i] + simpson((self.f)(x0), (self.f)(m), (self.f)(x), x - x0)
    }
}

#[allow(clippy::too_many_arguments)]
fn build_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    xs: &mut Vec<f64>,
    prefix: &mut Vec<f64>,
) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        // accept both halves so eval-time panels stay sub-interval sized
        let corr = delta / 15.0;
        xs.push(m);
        prefix.push(prefix.last().unwrap() + left + 0.5 * corr);
        xs.push(b);
        prefix.push(prefix.last().unwrap() + right + 0.5 * corr);
    } else {
        build_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, xs, prefix);
        build_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, xs, prefix);
    }
}
