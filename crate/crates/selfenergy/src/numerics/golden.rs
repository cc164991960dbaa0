//! Golden-section minimization on a bracket. Probes are strictly interior, so
//! callers may pass brackets whose endpoints are not evaluable.

const INVPHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5)-1)/2

/// Result of a golden-section search.
#[derive(Debug, Clone, Copy)]
pub struct GoldenResult {
    /// Abscissa of the best probe.
    pub x: f64,
    /// Objective value at `x`.
    pub fx: f64,
    /// Number of objective evaluations.
    pub evals: usize,
}

/// Minimize `f` on `[a, b]` to relative abscissa tolerance `rtol`.
///
/// Stops when the bracket width drops below `rtol` times the mean magnitude
/// of the interior probes. The objective must be finite on the open interval;
/// unimodality is the caller's responsibility.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rtol: f64) -> GoldenResult {
    match golden_min_try(|x| Ok::<f64, core::convert::Infallible>(f(x)), a, b, rtol) {
        Ok(r) => r,
        Err(e) => match e {},
    }
}

/// Fallible variant: the first `Err` from the objective aborts the search.
pub fn golden_min_try<E, F: FnMut(f64) -> Result<f64, E>>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    rtol: f64,
) -> Result<GoldenResult, E> {
    assert!(b > a, "golden_min_try: empty bracket");
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut evals = 2usize;
    while (b - a) > rtol * 0.5 * (x1.abs() + x2.abs()) {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2)?;
        }
        evals += 1;
    }
    let (x, fx) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    Ok(GoldenResult { x, fx, evals })
}
