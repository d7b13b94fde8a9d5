//! Quadrature for `CdNumber`-valued integrands: adaptive Gauss–Kronrod,
//! periodic trapezoid and Wynn's epsilon acceleration.

use crate::algebra::CdNumber;
use crate::error::{CdError, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
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

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: CdNumber,
    pub error: f64,
    pub evals: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_intervals: 4096 }
    }
}

impl QuadOptions {
    pub fn tol(tol: f64) -> Self {
        Self { abs_tol: tol, rel_tol: tol, ..Self::default() }
    }
}

/// One 15-point Kronrod panel with its embedded 7-point Gauss error estimate.
pub fn gk15<F>(f: &F, a: f64, b: f64) -> Result<(CdNumber, f64)>
where
    F: Fn(f64) -> Result<CdNumber>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut rk = fc.scale(WGK[7]);
    let mut rg = fc.scale(WG[3]);
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx)? + f(c + dx)?;
        rk += s.scale(WGK[j]);
        if j % 2 == 1 {
            rg += s.scale(WG[j / 2]);
        }
    }
    let val = rk.scale(h);
    let err = (rk - rg).scale(h).norm();
    Ok((val, err))
}

/// Globally adaptive Gauss–Kronrod on `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<CdNumber>,
{
    if a == b {
        return Ok(QuadResult { value: CdNumber::zero(0), error: 0.0, evals: 0 });
    }
    let (v, e) = gk15(&f, a, b)?;
    let mut panels = vec![(a, b, v, e)];
    let mut evals = 15;
    loop {
        let total: CdNumber = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        let goal = opts.abs_tol.max(opts.rel_tol * total.norm());
        if !total.is_finite() {
            return Err(CdError::QuadratureFailure("non-finite integrand".into()));
        }
        if err <= goal {
            return Ok(QuadResult { value: total, error: err, evals });
        }
        if panels.len() >= opts.max_intervals {
            return Err(CdError::QuadratureFailure(format!(
                "error {err:e} above {goal:e} after {} panels",
                panels.len()
            )));
        }
        let (k, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (pa, pb, _, _) = panels.swap_remove(k);
        let m = 0.5 * (pa + pb);
        if m <= pa || m >= pb {
            return Err(CdError::QuadratureFailure(format!("panel collapsed near {m}")));
        }
        let (v1, e1) = gk15(&f, pa, m)?;
        let (v2, e2) = gk15(&f, m, pb)?;
        evals += 30;
        panels.push((pa, m, v1, e1));
        panels.push((m, pb, v2, e2));
    }
}

/// Trapezoid rule for a 1-periodic integrand on `[0, 1)`, doubling the
/// node count from 16 until successive values agree.
pub fn periodic<F>(f: F, tol: f64, max_nodes: usize) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<CdNumber>,
{
    let mut n = 16usize;
    let mut sum = CdNumber::zero(0);
    for k in 0..n {
        sum += f(k as f64 / n as f64)?;
    }
    let mut prev = sum.scale(1.0 / n as f64);
    loop {
        if 2 * n > max_nodes {
            return Err(CdError::QuadratureFailure(format!(
                "trapezoid did not settle within {max_nodes} nodes"
            )));
        }
        for k in 0..n {
            sum += f((2 * k + 1) as f64 / (2 * n) as f64)?;
        }
        n *= 2;
        let cur = sum.scale(1.0 / n as f64);
        let err = cur.dist(&prev);
        if !cur.is_finite() {
            return Err(CdError::QuadratureFailure("non-finite integrand".into()));
        }
        if err <= tol * cur.norm().max(1.0) && n >= 64 {
            return Ok(QuadResult { value: cur, error: err, evals: n });
        }
        prev = cur;
    }
}

/// Wynn's epsilon algorithm on a sequence of partial sums. Returns the
/// accelerated limit and the change between the last two estimates.
pub fn wynn_epsilon(s: &[f64]) -> (f64, f64) {
    let n = s.len();
    if n < 3 {
        let last = s.last().copied().unwrap_or(0.0);
        let d = if n == 2 { (s[1] - s[0]).abs() } else { f64::INFINITY };
        return (last, d);
    }
    // e[k] holds column k of the epsilon table for the current anti-diagonal
    let mut prev_col: Vec<f64> = vec![0.0; n + 1];
    let mut col: Vec<f64> = s.to_vec();
    let mut best = s[n - 1];
    let mut best_prev = s[n - 2];
    let mut k = 0;
    while col.len() > 1 {
        let mut next = Vec::with_capacity(col.len() - 1);
        for j in 0..col.len() - 1 {
            let d = col[j + 1] - col[j];
            let base = if k == 0 { 0.0 } else { prev_col[j + 1] };
            if d == 0.0 {
                next.push(f64::INFINITY);
            } else {
                next.push(base + 1.0 / d);
            }
        }
        prev_col = col;
        col = next;
        k += 1;
        if k % 2 == 0 && col.iter().all(|x| x.is_finite()) {
            best = col[col.len() - 1];
            best_prev = if col.len() > 1 { col[col.len() - 2] } else { best_prev };
        } else if k % 2 == 0 {
            break;
        }
    }
    (best, (best - best_prev).abs())
}

/// Componentwise [`wynn_epsilon`].
pub fn wynn_epsilon_cd(s: &[CdNumber]) -> (CdNumber, f64) {
    let level = s.iter().map(|x| x.level()).max().unwrap_or(0);
    let mut c = [0.0; 8];
    let mut err = 0.0f64;
    for (j, cj) in c.iter_mut().enumerate().take(crate::algebra::dim(level)) {
        let seq: Vec<f64> = s.iter().map(|x| x.coeff(j)).collect();
        let (v, e) = wynn_epsilon(&seq);
        *cj = v;
        err = err.hypot(e);
    }
    (CdNumber::from_array(level, c), err)
}
