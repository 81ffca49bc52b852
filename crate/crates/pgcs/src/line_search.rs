//! Derivative-free one-dimensional minimization: golden-ratio bracketing
//! followed by Brent refinement (parabolic interpolation with a
//! golden-section fallback).

/// Golden ratio used to expand the bracket.
const GOLD: f64 = 1.618033988749895;
/// Complement of the inverse golden ratio, Brent's section step.
const CGOLD: f64 = 0.3819660112501051;
/// Cap on how far a parabolic trial may overshoot the current interval.
const GROW_LIMIT: f64 = 100.0;
/// Guards the parabolic denominator against cancellation.
const TINY_DENOM: f64 = 1e-21;
/// Absolute floor added to Brent's relative tolerance.
const ZEPS: f64 = 1e-11;

/// Default budget of bracket expansions before giving up on a direction.
pub const DEFAULT_BRACKET_EXPANSIONS: usize = 50;
/// Default Brent iteration cap.
pub const DEFAULT_BRENT_ITERS: usize = 100;

/// A three-point bracket: `fb < fa` and `fb < fc`, with `b` between `a`
/// and `c` (in either orientation).
#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub fa: f64,
    pub fb: f64,
    pub fc: f64,
}

/// No descending triple was found: the direction is flat (all probes equal)
/// or heads downhill past the expansion budget. Carries the best point seen
/// so callers can still use it.
#[derive(Debug, Clone, Copy)]
pub struct BracketFailure {
    pub best_t: f64,
    pub best_f: f64,
    pub expansions: usize,
}

/// Brackets a minimum of `phi` starting from the probes `t0`, `t1`.
///
/// Expands away from the higher endpoint by golden-ratio steps, with a
/// parabolic-extrapolation shortcut whose step is clamped to `GROW_LIMIT`
/// times the current interval. Fails after `max_expansions` growth steps or
/// when the probes never produce a strict interior minimum (a flat line).
pub fn bracket_minimum<F>(
    mut phi: F,
    t0: f64,
    t1: f64,
    max_expansions: usize,
) -> Result<Bracket, BracketFailure>
where
    F: FnMut(f64) -> f64,
{
    let mut a = t0;
    let mut b = t1;
    let mut fa = phi(a);
    let mut fb = phi(b);
    // Walk downhill from a to b.
    if fa < fb {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = b + GOLD * (b - a);
    let mut fc = phi(c);

    let mut best_t = if fb <= fc { b } else { c };
    let mut best_f = fb.min(fc);
    let mut expansions = 0usize;

    while fc < fb {
        if expansions >= max_expansions {
            return Err(BracketFailure {
                best_t,
                best_f,
                expansions,
            });
        }
        expansions += 1;

        // Parabolic extrapolation through (a, b, c), clamped.
        let r = (b - a) * (fb - fc);
        let q = (b - c) * (fb - fa);
        let diff = q - r;
        let denom = if diff.abs() < TINY_DENOM {
            2.0 * TINY_DENOM * diff.signum()
        } else {
            2.0 * diff
        };
        let mut w = b - ((b - c) * q - (b - a) * r) / denom;
        let wlim = b + GROW_LIMIT * (c - b);
        let mut fw;

        if (w - c) * (b - w) > 0.0 {
            // Trial point between b and c.
            fw = phi(w);
            if fw < best_f {
                best_t = w;
                best_f = fw;
            }
            if fw < fc {
                a = b;
                fa = fb;
                b = w;
                fb = fw;
                break;
            } else if fw > fb {
                c = w;
                fc = fw;
                break;
            }
            w = c + GOLD * (c - b);
            fw = phi(w);
        } else if (w - wlim) * (wlim - c) >= 0.0 {
            // Trial beyond the growth limit: clamp to it.
            w = wlim;
            fw = phi(w);
        } else if (w - wlim) * (c - w) > 0.0 {
            // Trial between c and the limit.
            fw = phi(w);
            if fw < fc {
                b = c;
                fb = fc;
                c = w;
                fc = fw;
                w = c + GOLD * (c - b);
                fw = phi(w);
            }
        } else {
            // Reject the parabolic trial; plain golden step.
            w = c + GOLD * (c - b);
            fw = phi(w);
        }
        a = b;
        fa = fb;
        b = c;
        fb = fc;
        c = w;
        fc = fw;
        if fb < best_f {
            best_t = b;
            best_f = fb;
        }
        if fc < best_f {
            best_t = c;
            best_f = fc;
        }
    }

    if fb < fa && fb < fc {
        Ok(Bracket {
            a,
            b,
            c,
            fa,
            fb,
            fc,
        })
    } else {
        // Flat probes: no strict interior minimum.
        Err(BracketFailure {
            best_t,
            best_f,
            expansions,
        })
    }
}

/// Result of the Brent refinement.
#[derive(Debug, Clone, Copy)]
pub struct LineMin {
    pub t: f64,
    pub f: f64,
    pub iters: usize,
    /// False when the iteration cap was hit before the interval test passed.
    pub converged: bool,
}

/// Shrinks a valid bracket to a minimizer of `phi`.
///
/// Classic Brent: a parabola through the three best points proposes the next
/// probe, falling back to golden sections whenever the parabolic step is
/// unusable. The returned point satisfies
/// `|t - argmin| <= tol*|t| + ZEPS` on well-behaved functions; on the cap it
/// returns the best point seen with `converged = false`.
pub fn brent_line_min<F>(mut phi: F, bracket: &Bracket, tol: f64, max_iters: usize) -> LineMin
where
    F: FnMut(f64) -> f64,
{
    let mut a = bracket.a.min(bracket.c);
    let mut b = bracket.a.max(bracket.c);
    let mut x = bracket.b;
    let mut w = x;
    let mut v = x;
    let mut fx = bracket.fb;
    let mut fw = fx;
    let mut fv = fx;
    let mut d = 0.0f64;
    let mut e = 0.0f64;

    for iter in 0..max_iters {
        let mid = 0.5 * (a + b);
        let tol1 = tol * x.abs() + ZEPS;
        let tol2 = 2.0 * tol1;
        if (x - mid).abs() <= tol2 - 0.5 * (b - a) {
            return LineMin {
                t: x,
                f: fx,
                iters: iter,
                converged: true,
            };
        }

        let mut use_golden = true;
        if e.abs() > tol1 {
            // Parabola through x, v, w.
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            e = d;
            // Acceptable only if it stays inside and beats half the
            // step before last.
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if (u - a) < tol2 || (b - u) < tol2 {
                    d = if mid > x { tol1 } else { -tol1 };
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if x >= mid { a - x } else { b - x };
            d = CGOLD * e;
        }

        let u = if d.abs() >= tol1 {
            x + d
        } else {
            x + if d >= 0.0 { tol1 } else { -tol1 }
        };
        let fu = phi(u);

        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }

    LineMin {
        t: x,
        f: fx,
        iters: max_iters,
        converged: false,
    }
}
