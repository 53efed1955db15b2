//! Floating-point semidefinite feasibility search and exact recovery.
//!
//! The search runs an infeasible-start primal-dual interior-point iteration
//! (HKM direction) on the feasibility pair
//!
//! ```text
//!   dual:   find alpha with  S = -F0 + sum_i alpha_i F_i  >= 0
//!   primal: min tr(-F0 X)  s.t.  tr(F_i X) = 0,  X >= 0
//! ```
//!
//! exactly the form production solvers are fed. When the dual feasible set
//! has empty interior the central path does not exist: the primal iterates
//! run off along a recession ray, Schur systems lose rank, and steps shrink
//! until the iteration reports `Stalled`, the same "small steps" failure
//! the off-the-shelf solvers show on degenerate instances. Success is only
//! ever claimed as `Feasible` for a floating-point estimate; exactness comes
//! later, from [`rationalize`] plus exact verification, never from here.
//!
//! All tolerances refer to the pencil normalized by its largest absolute
//! entry.

use alloc::vec::Vec;

use num_bigint::BigInt;
// Float supplies sqrt/ln/floor on f64 when building without std (via libm)
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{FromPrimitive, One, Zero};

use crate::linalg::RatMatrix;
use crate::rational::Rational;
use crate::reduction::{slice, AffineRelation, Pencil, SliceError};

/// How a feasibility search ended.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolveStatus {
    /// A point with `lambda_min >= -tol` (normalized) was reached and the
    /// primal-dual iteration showed no degeneracy signature.
    Feasible,
    /// Step sizes collapsed or the slack `mu = max(0, -lambda_min)` stopped
    /// improving while still above tolerance.
    Stalled,
    /// A primal ray with `tr(F_i X) ~ 0` and `tr(-F0 X) < 0` built up:
    /// strong numeric evidence (not proof) that no PSD point exists.
    LikelyInfeasible,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Parameter estimate at termination (meaningful for Feasible/Stalled).
    pub alpha: Vec<f64>,
    /// Slack value `max(0, -lambda_min)` of the normalized pencil, one entry
    /// per iteration.
    pub mu_trace: Vec<f64>,
    /// Smallest eigenvalue of the normalized pencil at `alpha`.
    pub min_eig_estimate: f64,
}

/// Dense symmetric f64 matrix, row-major.
#[derive(Clone, Debug)]
struct FMat {
    n: usize,
    a: Vec<f64>,
}

impl FMat {
    fn zeros(n: usize) -> Self {
        FMat {
            n,
            a: alloc::vec![0.0; n * n],
        }
    }

    fn identity(n: usize) -> Self {
        let mut m = FMat::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    fn add_scaled(&mut self, other: &FMat, c: f64) {
        for (x, y) in self.a.iter_mut().zip(&other.a) {
            *x += c * y;
        }
    }

    fn scale(&mut self, c: f64) {
        for x in self.a.iter_mut() {
            *x *= c;
        }
    }

    fn matmul(&self, other: &FMat) -> FMat {
        let n = self.n;
        let mut out = FMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let v = self.get(i, k);
                if v == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += v * other.get(k, j);
                }
            }
        }
        out
    }

    fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                let v = 0.5 * (self.get(i, j) + self.get(j, i));
                self.set(i, j, v);
                self.set(j, i, v);
            }
        }
    }

    fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    fn inner(&self, other: &FMat) -> f64 {
        self.a.iter().zip(&other.a).map(|(x, y)| x * y).sum()
    }

    fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

/// Cyclic Jacobi eigendecomposition for symmetric matrices. Returns the
/// eigenvalues in ascending order; `vectors` holds the matching eigenvectors
/// as columns when requested.
fn jacobi_eigh(m: &FMat, want_vectors: bool) -> (Vec<f64>, Option<FMat>) {
    let n = m.n;
    let mut a = m.clone();
    let mut v = if want_vectors {
        Some(FMat::identity(n))
    } else {
        None
    };
    let scale = a.max_abs().max(1e-300);
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off += a.get(i, j) * a.get(i, j);
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq.abs() <= 1e-18 * scale {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                if let Some(vm) = v.as_mut() {
                    for k in 0..n {
                        let vkp = vm.get(k, p);
                        let vkq = vm.get(k, q);
                        vm.set(k, p, c * vkp - s * vkq);
                        vm.set(k, q, s * vkp + c * vkq);
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    order.sort_by(|&i, &j| {
        diag[i]
            .partial_cmp(&diag[j])
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let eigs: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = v.map(|vm| {
        let mut out = FMat::zeros(n);
        for (new_col, &old_col) in order.iter().enumerate() {
            for k in 0..n {
                out.set(k, new_col, vm.get(k, old_col));
            }
        }
        out
    });
    (eigs, vectors)
}

fn lambda_min(m: &FMat) -> f64 {
    if m.n == 0 {
        return 0.0;
    }
    jacobi_eigh(m, false).0[0]
}

/// Inverse of a PD matrix through its eigendecomposition.
fn inv_pd(m: &FMat) -> Option<FMat> {
    let n = m.n;
    let (w, v) = jacobi_eigh(m, true);
    let v = v.unwrap();
    if w[0] <= 0.0 {
        return None;
    }
    let mut out = FMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += v.get(i, k) * v.get(j, k) / w[k];
            }
            out.set(i, j, acc);
        }
    }
    Some(out)
}

/// Solve the m x m system `H x = g` by Gaussian elimination with partial
/// pivoting. Returns None when a pivot vanishes to machine zero.
fn solve_dense(h: &[Vec<f64>], g: &[f64]) -> Option<Vec<f64>> {
    let m = g.len();
    let mut a: Vec<Vec<f64>> = h.to_vec();
    let mut b: Vec<f64> = g.to_vec();
    for col in 0..m {
        let (p, mag) = (col..m)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap_or(core::cmp::Ordering::Equal))?;
        if !mag.is_finite() || mag < 1e-300 {
            return None;
        }
        a.swap(col, p);
        b.swap(col, p);
        for r in col + 1..m {
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..m {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = alloc::vec![0.0; m];
    for col in (0..m).rev() {
        let mut acc = b[col];
        for c in col + 1..m {
            acc -= a[col][c] * x[c];
        }
        x[col] = acc / a[col][col];
        if !x[col].is_finite() {
            return None;
        }
    }
    Some(x)
}

fn rational_to_f64(r: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

/// Floating-point eigenvalues of an exact symmetric matrix, ascending, via
/// the solver's Jacobi iteration. Diagnostic oracle only; exact claims go
/// through [`crate::linalg::is_psd_exact`].
pub fn float_eigenvalues(m: &RatMatrix) -> Vec<f64> {
    assert!(m.is_square(), "eigenvalues need a square matrix");
    let n = m.rows();
    let mut fm = FMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            fm.set(i, j, rational_to_f64(m.get(i, j)));
        }
    }
    jacobi_eigh(&fm, false).0
}

struct FloatPencil {
    /// `pencil(alpha) = c + sum alpha_i fs[i]`, normalized.
    c: FMat,
    fs: Vec<FMat>,
    /// Indices kept after dropping structurally zero rows/columns.
    compressed: bool,
}

impl FloatPencil {
    fn build(pencil: &Pencil) -> FloatPencil {
        let n = pencil.dim();
        let m = pencil.param_count();
        let full_c: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| -rational_to_f64(pencil.f0.get(i, j)))
                    .collect()
            })
            .collect();
        let full_fs: Vec<Vec<Vec<f64>>> = (0..m)
            .map(|k| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| rational_to_f64(pencil.basis[k].get(i, j)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        // structurally zero rows carry no constraint; production solvers
        // preprocess them away, and keeping them would make every iterate
        // singular
        let keep: Vec<usize> = (0..n)
            .filter(|&i| {
                full_c[i].iter().any(|&x| x != 0.0)
                    || full_fs.iter().any(|f| f[i].iter().any(|&x| x != 0.0))
            })
            .collect();
        let nn = keep.len();
        let mut scale = 1.0f64;
        let mut c = FMat::zeros(nn);
        for (ii, &i) in keep.iter().enumerate() {
            for (jj, &j) in keep.iter().enumerate() {
                c.set(ii, jj, full_c[i][j]);
            }
        }
        scale = scale.max(c.max_abs());
        let mut fs = Vec::with_capacity(m);
        for f in &full_fs {
            let mut fm = FMat::zeros(nn);
            for (ii, &i) in keep.iter().enumerate() {
                for (jj, &j) in keep.iter().enumerate() {
                    fm.set(ii, jj, f[i][j]);
                }
            }
            scale = scale.max(fm.max_abs());
            fs.push(fm);
        }
        c.scale(1.0 / scale);
        for f in fs.iter_mut() {
            f.scale(1.0 / scale);
        }
        FloatPencil {
            c,
            fs,
            compressed: nn < n,
        }
    }

    fn at(&self, alpha: &[f64]) -> FMat {
        let mut s = self.c.clone();
        for (a, f) in alpha.iter().zip(&self.fs) {
            s.add_scaled(f, *a);
        }
        s
    }

    fn lambda_min_full(&self, alpha: &[f64]) -> f64 {
        let lam = lambda_min(&self.at(alpha));
        if self.compressed {
            lam.min(0.0)
        } else {
            lam
        }
    }
}

/// Log-det re-centering ladder run after a feasible point is found: walks a
/// few shrinking barrier levels, accepting only steps that improve the
/// barrier without giving up feasibility. A step must keep the smallest
/// eigenvalue above both `-tol/2` and its own floor `min(current, 0)`, so
/// the returned point still satisfies the Feasible contract while moving
/// toward the relative interior, where rationalization has margin to land.
fn center(fp: &FloatPencil, mut alpha: Vec<f64>, tol: f64) -> Vec<f64> {
    let n = fp.c.n;
    let m = fp.fs.len();
    if m == 0 || n == 0 {
        return alpha;
    }
    for mu in [1e-1, 1e-2, 1e-3, 1e-4, 1e-6] {
        'steps: for _ in 0..12 {
            let mut s = fp.at(&alpha);
            let lam_now = lambda_min(&s);
            for i in 0..n {
                s.set(i, i, s.get(i, i) + mu);
            }
            let (w, _) = jacobi_eigh(&s, false);
            if w[0] <= 0.0 {
                break 'steps;
            }
            let sinv = match inv_pd(&s) {
                Some(si) => si,
                None => break 'steps,
            };
            let g: Vec<f64> = fp.fs.iter().map(|f| sinv.inner(f)).collect();
            let gn = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if gn < 1e-10 {
                break 'steps;
            }
            // the 1e-13 slack absorbs eigensolver jitter on structurally
            // singular pencils; the -tol/2 bound keeps the contract
            let floor = (-0.5 * tol).max(lam_now.min(0.0) - 1e-13);
            let f0: f64 = w.iter().map(|&x| x.ln()).sum();
            let mut t = 1.0 / gn.max(1.0);
            let mut accepted = false;
            while t * gn > 1e-13 {
                let cand: Vec<f64> = alpha.iter().zip(&g).map(|(a, gi)| a + t * gi).collect();
                let s2 = fp.at(&cand);
                let lam2 = lambda_min(&s2);
                let mut s2mu = s2;
                for i in 0..n {
                    s2mu.set(i, i, s2mu.get(i, i) + mu);
                }
                let (w2, _) = jacobi_eigh(&s2mu, false);
                if w2[0] > 0.0 && lam2 >= floor {
                    let f2: f64 = w2.iter().map(|&x| x.ln()).sum();
                    if f2 > f0 + 1e-13 {
                        alpha = cand;
                        accepted = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !accepted {
                break 'steps;
            }
        }
    }
    alpha
}

/// Search for `alpha` making the pencil PSD, by minimizing the slack
/// `mu >= 0` with `pencil(alpha) + mu*Id >= 0` through a primal-dual
/// interior-point iteration.
///
/// Outcomes are floating point only. `Feasible` means the normalized pencil
/// reached `lambda_min >= -tol` at the returned estimate *and* the primal
/// side converged; degenerate instances (feasible set with empty interior)
/// show diverging primal iterates and collapsing steps instead, and come
/// back `Stalled`. `LikelyInfeasible` is a heuristic flag, never a proof.
pub fn solve_feasibility(pencil: &Pencil, tol: f64, max_iter: usize) -> SolveOutcome {
    let fp = FloatPencil::build(pencil);
    let n = fp.c.n;
    let m = fp.fs.len();
    let mut alpha = alloc::vec![0.0; m];
    let mut mu_trace = Vec::new();

    if n == 0 {
        return SolveOutcome {
            status: SolveStatus::Feasible,
            alpha,
            mu_trace: alloc::vec![0.0],
            min_eig_estimate: 0.0,
        };
    }
    if m == 0 {
        let lam = fp.lambda_min_full(&alpha);
        mu_trace.push((-lam).max(0.0));
        let status = if lam >= -tol {
            SolveStatus::Feasible
        } else {
            SolveStatus::LikelyInfeasible
        };
        return SolveOutcome {
            status,
            alpha,
            mu_trace,
            min_eig_estimate: lam,
        };
    }

    let mut x = FMat::identity(n);
    let mut s = FMat::identity(n);
    s.scale((2.0 * fp.c.max_abs()).max(1.0));
    let sigma = 0.3;

    let mut plateau = 0usize;
    let mut consec_small = 0usize;
    let mut best_slack = f64::INFINITY;
    let mut trx_hist: Vec<f64> = Vec::new();
    let mut primal_runaway = false;
    let mut status = SolveStatus::Stalled;

    for _ in 0..max_iter {
        let lam = lambda_min(&fp.at(&alpha));
        let slack = (-lam).max(0.0);
        mu_trace.push(slack);
        let trx = x.trace();
        trx_hist.push(trx);
        let h = trx_hist.len();
        // a primal iterate running off along a recession ray is the
        // signature of a dual feasible set with empty interior; a tolerable
        // dual estimate reached in that state is not a certified solve, and
        // a later collapse of the runaway X is rounding noise, not recovery
        let growing = h >= 6 && trx_hist[h - 1] > 1.2 * trx_hist[h - 6];
        let diverging = trx > 8.0 * n as f64 && (growing || trx > 1e6 * n as f64);
        if lam >= -tol && diverging {
            primal_runaway = true;
        }
        if lam >= -tol && !diverging && !primal_runaway {
            alpha = center(&fp, alpha, tol);
            status = SolveStatus::Feasible;
            break;
        }
        if !trx.is_finite() || trx > 1e10 {
            status = SolveStatus::Stalled;
            break;
        }

        let mu_c = x.inner(&s) / n as f64;
        let rp: Vec<f64> = fp.fs.iter().map(|f| f.inner(&x)).collect(); // target tr(F_i X) = 0
        let rp_norm = rp.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let obj = fp.c.inner(&x);
        if rp_norm / trx.max(1.0) < 1e-7 && obj / trx.max(1e-12) < -1e-5 {
            status = SolveStatus::LikelyInfeasible;
            break;
        }

        // Rd = C - sum y_i A_i - S with A_i = -F_i, i.e. pencil(alpha) - S
        let mut rd = fp.at(&alpha);
        rd.add_scaled(&s, -1.0);
        let sinv = match inv_pd(&s) {
            Some(si) => si,
            None => {
                status = SolveStatus::Stalled;
                break;
            }
        };
        // Schur matrix M_ij = tr(A_i X A_j S^-1) with A_i = -F_i: signs cancel
        let xfs: Vec<FMat> = fp.fs.iter().map(|f| x.matmul(f).matmul(&sinv)).collect();
        let schur: Vec<Vec<f64>> = fp
            .fs
            .iter()
            .map(|fi| xfs.iter().map(|xfj| fi.inner(&transpose(xfj))).collect())
            .collect();
        // rc = sigma*mu*S^-1 - X - X Rd S^-1
        let mut rc = sinv.clone();
        rc.scale(sigma * mu_c);
        rc.add_scaled(&x, -1.0);
        let xrs = x.matmul(&rd).matmul(&sinv);
        rc.add_scaled(&xrs, -1.0);
        // rhs_i = rp_i - tr(A_i rc) = rp_i + tr(F_i rc); F_i symmetric makes
        // the trace an elementwise inner product
        let rhs: Vec<f64> = fp
            .fs
            .iter()
            .zip(&rp)
            .map(|(fi, rpi)| rpi + fi.inner(&rc))
            .collect();
        let dy = match solve_dense(&schur, &rhs) {
            Some(d) if d.iter().all(|v| v.is_finite()) => d,
            _ => {
                status = SolveStatus::Stalled;
                break;
            }
        };
        // dS = Rd - sum dy_j A_j = Rd + sum dy_j F_j
        let mut ds = rd.clone();
        for (f, d) in fp.fs.iter().zip(&dy) {
            ds.add_scaled(f, *d);
        }
        // dX = sigma*mu*S^-1 - X - X dS S^-1, symmetrized
        let mut dx = sinv.clone();
        dx.scale(sigma * mu_c);
        dx.add_scaled(&x, -1.0);
        let xdss = x.matmul(&ds).matmul(&sinv);
        dx.add_scaled(&xdss, -1.0);
        dx.symmetrize();

        let ap = 0.98 * max_step(&x, &dx);
        let ad = 0.98 * max_step(&s, &ds);
        let dx_norm = dx.max_abs();
        let dy_norm = dy.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let step_size = (ap * dx_norm).max(ad * (dy_norm + ds.max_abs()));
        if step_size < 1e-12 {
            consec_small += 1;
            if consec_small >= 3 {
                status = SolveStatus::Stalled;
                break;
            }
        } else {
            consec_small = 0;
        }
        x.add_scaled(&dx, ap);
        x.symmetrize();
        for (a, d) in alpha.iter_mut().zip(&dy) {
            *a += ad * d;
        }
        s.add_scaled(&ds, ad);
        s.symmetrize();

        if (lam >= -tol && primal_runaway) || (slack > tol && slack > best_slack * (1.0 - 1e-3)) {
            plateau += 1;
        } else {
            plateau = 0;
        }
        best_slack = best_slack.min(slack);
        if plateau >= 50 {
            status = SolveStatus::Stalled;
            break;
        }
    }

    let min_eig_estimate = fp.lambda_min_full(&alpha);
    if status == SolveStatus::Feasible {
        mu_trace.push((-min_eig_estimate).max(0.0));
    }
    SolveOutcome {
        status,
        alpha,
        mu_trace,
        min_eig_estimate,
    }
}

fn transpose(m: &FMat) -> FMat {
    let n = m.n;
    let mut out = FMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.set(j, i, m.get(i, j));
        }
    }
    out
}

/// Largest step `t <= 1` (searched geometrically) keeping `mat + t*dir`
/// positive definite.
fn max_step(mat: &FMat, dir: &FMat) -> f64 {
    let mut t = 1.0f64;
    for _ in 0..50 {
        let mut cand = mat.clone();
        cand.add_scaled(dir, t);
        if lambda_min(&cand) > 0.0 {
            return t;
        }
        t *= 0.7;
    }
    0.0
}

/// Best continued-fraction convergent of `x` with denominator at most
/// `max_den`. Every returned convergent `p/q` satisfies the standard bound
/// `|x - p/q| <= 1/q^2`. Non-finite input maps to 0.
pub fn rationalize_one(x: f64, max_den: u64) -> Rational {
    assert!(max_den >= 1, "max_den must be at least 1");
    if !x.is_finite() {
        return Rational::zero();
    }
    let negative = x < 0.0;
    let mut rest = if negative { -x } else { x };
    let max_den_big = BigInt::from(max_den);

    // convergent recurrence h_k = a_k h_{k-1} + h_{k-2}
    let mut h_prev = BigInt::zero();
    let mut k_prev = BigInt::one();
    let mut h = BigInt::one();
    let mut k = BigInt::zero();
    for _ in 0..64 {
        let a_f = rest.floor();
        let a = BigInt::from_f64(a_f).unwrap_or_else(BigInt::zero);
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        if k_next > max_den_big && !k.is_zero() {
            break;
        }
        h_prev = core::mem::replace(&mut h, h_next);
        k_prev = core::mem::replace(&mut k, k_next);
        let frac = rest - a_f;
        // below f64 resolution the expansion is exact
        if frac.abs() < 1e-15 * a_f.abs().max(1.0) {
            break;
        }
        rest = 1.0 / frac;
        if !rest.is_finite() {
            break;
        }
    }
    let r = Rational::new(h, k);
    if negative {
        -r
    } else {
        r
    }
}

/// Rationalize each coordinate independently.
pub fn rationalize(alpha: &[f64], max_den: u64) -> Vec<Rational> {
    alpha.iter().map(|&x| rationalize_one(x, max_den)).collect()
}

/// Pin one parameter to the rationalization of its float estimate and slice
/// the pencil down a dimension. Repeated slicing can empty the interior of
/// the remaining feasible set, at which point numeric solving fails and only
/// exact methods remain; the terminal 0-parameter pencil is decided by a
/// single exact PSD test.
pub fn slice_by_estimate(
    pencil: &Pencil,
    alpha_tilde: &[f64],
    index: usize,
    max_den: u64,
) -> Result<Pencil, SliceError> {
    let m = pencil.param_count();
    if index >= m {
        return Err(SliceError::ParamIndexOutOfRange { index, params: m });
    }
    if alpha_tilde.len() != m {
        return Err(SliceError::CoeffCountMismatch {
            expected: m,
            got: alpha_tilde.len(),
        });
    }
    let mut coeffs = alloc::vec![Rational::zero(); m];
    coeffs[index] = Rational::one();
    let relation = AffineRelation {
        coeffs,
        constant: rationalize_one(alpha_tilde[index], max_den),
    };
    slice(pencil, &relation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn jacobi_simple() {
        let mut m = FMat::zeros(2);
        m.set(0, 0, 2.0);
        m.set(1, 1, 1.0);
        m.set(0, 1, 1.0);
        m.set(1, 0, 1.0);
        let (w, v) = jacobi_eigh(&m, true);
        // eigenvalues of [[2,1],[1,1]] are (3 +- sqrt(5))/2
        let lo = (3.0 - 5.0f64.sqrt()) / 2.0;
        let hi = (3.0 + 5.0f64.sqrt()) / 2.0;
        assert!((w[0] - lo).abs() < 1e-12);
        assert!((w[1] - hi).abs() < 1e-12);
        let v = v.unwrap();
        // M v = w v for the first column
        let mv0 = m.get(0, 0) * v.get(0, 0) + m.get(0, 1) * v.get(1, 0);
        assert!((mv0 - w[0] * v.get(0, 0)).abs() < 1e-12);
    }

    #[test]
    fn rationalize_classic_convergents() {
        assert_eq!(rationalize_one(0.333333333, 10), rat(1, 3));
        assert_eq!(rationalize_one(-0.2727272727, 20), rat(-3, 11));
        assert_eq!(rationalize_one(78.99999999, 100), rat(79, 1));
        assert_eq!(rationalize_one(0.0, 5), rat(0, 1));
        assert_eq!(rationalize_one(0.5, 10), rat(1, 2));
        assert_eq!(rationalize_one(f64::NAN, 10), rat(0, 1));
    }

    #[test]
    fn rationalize_convergent_bound() {
        // |x - p/q| <= 1/q^2 for every returned convergent
        let xs = [0.7234115, 2.3719288774, -12.0625, 0.0001234, 117.2];
        for &x in &xs {
            for &cap in &[1u64, 7, 100, 100000] {
                let r = rationalize_one(x, cap);
                let p = num_traits::ToPrimitive::to_f64(r.numer()).unwrap();
                let q = num_traits::ToPrimitive::to_f64(r.denom()).unwrap();
                assert!(q >= 1.0 && q <= cap as f64, "deno {q} over cap {cap}");
                assert!(
                    (x - p / q).abs() <= 1.0 / (q * q) + 1e-15,
                    "x={x} cap={cap} got {r}"
                );
            }
        }
    }
}
