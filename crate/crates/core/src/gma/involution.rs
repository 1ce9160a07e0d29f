//! Involutions compatible with the trace: the block permutation, the
//! conjugating matrices P_i with their signs, the module maps tau_{i,j},
//! and the compatibility square between extension classes and functionals.

use crate::coeff::artinian::{AElem, Artinian};
use crate::coeff::{ArtinianCoeff, Coeff, Ideal};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{kernel_basis, row_space, zeros, Mat};
use crate::poly::RatFunc;

use super::ops::QuotMap;
use super::{GmaAlgebra};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InvolutionKind {
    Automorphism,
    AntiAutomorphism,
}

/// The involution as a linear map on the flat algebra: one image per basis
/// vector.
#[derive(Clone, Debug)]
pub struct InvolutionSpec<F: Field> {
    pub kind: InvolutionKind,
    pub images: Vec<Vec<F::Elem>>,
}

impl<F: Field> InvolutionSpec<F> {
    pub fn apply(&self, f: &F, x: &[F::Elem]) -> Vec<F::Elem> {
        let n = self.images.len();
        let mut out = vec![f.zero(); self.images[0].len()];
        for i in 0..n {
            if f.is_zero(&x[i]) {
                continue;
            }
            for (o, v) in out.iter_mut().zip(&self.images[i]) {
                *o = f.add(o, &f.mul(&x[i], v));
            }
        }
        out
    }

    /// Block transpose of a standard GMA (entries swap across the
    /// diagonal); well defined when opposite slots are literally equal.
    pub fn transpose(gma: &GmaAlgebra<F>) -> Result<Self> {
        let f = &gma.psc.alg.field;
        let mut images = Vec::with_capacity(gma.psc.alg.dim);
        for p in 0..gma.psc.alg.dim {
            let (i, j, a, b, m) = gma.layout_of(p);
            if gma.data.slot_dim(i, j) != gma.data.slot_dim(j, i) {
                return Err(Error::Shape(
                    "transpose needs opposite slots of equal dimension".into(),
                ));
            }
            let v = super::unit_vec(f, gma.data.slot_dim(j, i), m);
            images.push(gma.embed(j, i, b, a, &v));
        }
        Ok(InvolutionSpec {
            kind: InvolutionKind::AntiAutomorphism,
            images,
        })
    }
}

#[derive(Clone, Debug)]
pub struct InvolutionReport<F: Field> {
    pub kind: InvolutionKind,
    /// The block permutation sigma.
    pub sigma: Vec<usize>,
    /// P_i for fixed blocks (identity elsewhere), over A.
    pub p_mats: Vec<Mat<AElem<F>>>,
    /// For anti-automorphisms at fixed blocks: the sign of P_i (P_i =
    /// sign * transpose(P_i)); for automorphisms: the unit x_i with
    /// P_i^2 = x_i Id.
    pub signs: Vec<Option<AElem<F>>>,
    /// tau_{i,j} as matrices from slot (i,j) coordinates to the target
    /// slot coordinates.
    pub tau: Vec<Vec<Option<Mat<F::Elem>>>>,
    /// Did the extension-class square commute (when tested)?
    pub square_commutes: Option<bool>,
}

impl<F: Field> GmaAlgebra<F> {
    /// Validate tau and compute the full symmetry report. When
    /// `square_ideal` names an ideal J containing the relevant
    /// reducibility ideal, the compatibility square between functionals
    /// and extension classes is verified over A/J for every pair (i, j)
    /// of distinct blocks with singleton parts.
    pub fn analyze_involution(
        &self,
        tau: &InvolutionSpec<F>,
        square_ideal: Option<&Ideal<F>>,
    ) -> Result<InvolutionReport<F>> {
        let alg = &self.psc.alg;
        let f = &alg.field;
        let coeff = &self.data.coeff;
        let r = self.data.r();
        if tau.images.len() != alg.dim {
            return Err(Error::Shape("tau image count".into()));
        }
        // involution, (anti)morphism, trace-preserving
        for p in 0..alg.dim {
            let x = alg.basis_vec(p);
            let tx = tau.apply(f, &x);
            if tau.apply(f, &tx) != x {
                return Err(Error::Precondition(format!(
                    "tau^2 != id at basis {p}"
                )));
            }
            if self.psc.t_of(&tx) != self.psc.t_of(&x) {
                return Err(Error::Precondition(format!(
                    "T(tau(x)) != T(x) at basis {} ({})",
                    p, alg.labels[p]
                )));
            }
        }
        for p in 0..alg.dim {
            for q in 0..alg.dim {
                let x = alg.basis_vec(p);
                let y = alg.basis_vec(q);
                let lhs = tau.apply(f, &alg.mul(&x, &y));
                let rhs = match tau.kind {
                    InvolutionKind::Automorphism => {
                        alg.mul(&tau.apply(f, &x), &tau.apply(f, &y))
                    }
                    InvolutionKind::AntiAutomorphism => {
                        alg.mul(&tau.apply(f, &y), &tau.apply(f, &x))
                    }
                };
                if lhs != rhs {
                    return Err(Error::Precondition(format!(
                        "tau is not a (anti)morphism at basis pair ({p},{q})"
                    )));
                }
            }
        }
        // sigma from tau(e_i) = e_{sigma(i)}
        let mut sigma = vec![usize::MAX; r];
        for i in 0..r {
            let te = tau.apply(f, &self.e[i]);
            let j = (0..r)
                .find(|&j| te == self.e[j])
                .ok_or_else(|| {
                    Error::Precondition(format!("tau(e_{}) is not a block idempotent", i + 1))
                })?;
            sigma[i] = j;
        }
        for i in 0..r {
            if sigma[sigma[i]] != i {
                return Err(Error::Precondition("sigma is not an involution".into()));
            }
            if self.data.block_sizes[i] != self.data.block_sizes[sigma[i]] {
                return Err(Error::Precondition(
                    "sigma relates blocks of different sizes".into(),
                ));
            }
        }

        // P_i with psi_i = P_i psi_{sigma(i)}^bot P_i^{-1}; swapped pairs
        // share one matrix
        let mut p_mats: Vec<Mat<AElem<F>>> = (0..r)
            .map(|i| identity_amat(coeff, self.data.block_sizes[i]))
            .collect();
        let mut signs: Vec<Option<AElem<F>>> = vec![None; r];
        for i in 0..r {
            if sigma[i] < i {
                continue; // handled with its partner
            }
            let p = self.solve_conjugator(tau, &sigma, i)?;
            p_mats[i] = p.clone();
            p_mats[sigma[i]] = p;
        }
        // compute signs now that P_i are fixed
        for i in 0..r {
            if sigma[i] != i {
                continue;
            }
            let p = &p_mats[i];
            match tau.kind {
                InvolutionKind::Automorphism => {
                    // P^2 = x Id
                    let p2 = amat_mul(coeff, p, p);
                    let x = p2.at(0, 0).clone();
                    if !is_scalar_amat(coeff, &p2, &x) {
                        return Err(Error::Internal("P_i^2 is not scalar".into()));
                    }
                    signs[i] = Some(x);
                }
                InvolutionKind::AntiAutomorphism => {
                    // P (P^t)^{-1} = x Id with x = +-1
                    let pt = amat_transpose(p);
                    let ptinv = amat_inverse(coeff, &pt)
                        .ok_or_else(|| Error::Internal("P_i^t not invertible".into()))?;
                    let q = amat_mul(coeff, p, &ptinv);
                    let x = q.at(0, 0).clone();
                    if !is_scalar_amat(coeff, &q, &x) {
                        return Err(Error::Internal("P_i (P_i^t)^{-1} is not scalar".into()));
                    }
                    if x != coeff.from_int(1) && x != coeff.from_int(-1) {
                        return Err(Error::Internal("sign is not +-1".into()));
                    }
                    signs[i] = Some(x);
                }
            }
        }

        // tau_{i,j} on structural modules
        let mut tau_maps: Vec<Vec<Option<Mat<F::Elem>>>> = vec![vec![None; r]; r];
        for i in 0..r {
            for j in 0..r {
                if i == j || self.data.slots[i][j].fdim == 0 {
                    continue;
                }
                let (ti, tj) = match tau.kind {
                    InvolutionKind::Automorphism => (sigma[i], sigma[j]),
                    InvolutionKind::AntiAutomorphism => (sigma[j], sigma[i]),
                };
                let tgt_dim = self.data.slots[ti][tj].fdim;
                let src_dim = self.data.slots[i][j].fdim;
                if tgt_dim != src_dim {
                    return Err(Error::Precondition(format!(
                        "tau relates slots ({},{}) and ({},{}) of different dimension",
                        i + 1,
                        j + 1,
                        ti + 1,
                        tj + 1
                    )));
                }
                let (pl, pr) = match tau.kind {
                    InvolutionKind::Automorphism => (sigma[i], sigma[j]),
                    InvolutionKind::AntiAutomorphism => (sigma[j], sigma[i]),
                };
                let pl_inv = amat_inverse(coeff, &p_mats[pl])
                    .ok_or_else(|| Error::Internal("P not invertible".into()))?;
                let p_left = self.embed_amat(pl, &pl_inv);
                let p_right = self.embed_amat(pr, &p_mats[pr]);
                let mut m = zeros(f, tgt_dim, src_dim);
                for b in 0..src_dim {
                    let x = self.embed(i, j, 0, 0, &super::unit_vec(f, src_dim, b));
                    let tx = tau.apply(f, &x);
                    let y = alg.mul(&alg.mul(&p_left, &tx), &p_right);
                    let coords = self.extract(&y, ti, tj, 0, 0);
                    // the rest of the flat vector must vanish: the image
                    // lies in E_{ti} R E_{tj}
                    let mut rest = y.clone();
                    for (mm, c) in coords.iter().enumerate() {
                        let idx = self.flat_index(ti, tj, 0, 0, mm);
                        rest[idx] = f.sub(&rest[idx], c);
                    }
                    if !alg.is_zero_vec(&rest) {
                        return Err(Error::Internal(format!(
                            "tau_({},{}) image leaves the corner",
                            i + 1,
                            j + 1
                        )));
                    }
                    for (row, c) in coords.iter().enumerate() {
                        *m.at_mut(row, b) = c.clone();
                    }
                }
                // isomorphism of A-modules: invertible as F-matrix and
                // A-equivariant (A-equivariance follows from centrality)
                if crate::linalg::inverse(f, &m).is_none() {
                    return Err(Error::Internal(format!(
                        "tau_({},{}) is not invertible",
                        i + 1,
                        j + 1
                    )));
                }
                tau_maps[i][j] = Some(m);
            }
        }

        // multiplicativity across phi and preservation of A'
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    if i == j || j == k {
                        continue;
                    }
                    let (sij, sjk) = (&tau_maps[i][j], &tau_maps[j][k]);
                    let (mij, mjk) = match (sij, sjk) {
                        (Some(a), Some(b)) => (a, b),
                        _ => continue,
                    };
                    for b1 in 0..self.data.slots[i][j].fdim {
                        for b2 in 0..self.data.slots[j][k].fdim {
                            let x = super::unit_vec(f, self.data.slots[i][j].fdim, b1);
                            let y = super::unit_vec(f, self.data.slots[j][k].fdim, b2);
                            let xy = self.data.eval_phi(i, j, k, &x, &y);
                            let tx = crate::linalg::mat_vec(f, mij, &x);
                            let ty = crate::linalg::mat_vec(f, mjk, &y);
                            let lhs = match tau.kind {
                                InvolutionKind::Automorphism => self.data.eval_phi(
                                    sigma[i],
                                    sigma[j],
                                    sigma[k],
                                    &tx,
                                    &ty,
                                ),
                                InvolutionKind::AntiAutomorphism => self.data.eval_phi(
                                    sigma[k],
                                    sigma[j],
                                    sigma[i],
                                    &ty,
                                    &tx,
                                ),
                            };
                            let rhs = if i == k {
                                // target is A itself; tau_{i,k} on A is the
                                // identity after the P-normalization
                                xy.clone()
                            } else {
                                match &tau_maps[i][k] {
                                    Some(mik) => crate::linalg::mat_vec(f, mik, &xy),
                                    None => xy.clone(),
                                }
                            };
                            if lhs != rhs {
                                return Err(Error::Internal(format!(
                                    "tau is not multiplicative across phi({},{},{})",
                                    i + 1,
                                    j + 1,
                                    k + 1
                                )));
                            }
                        }
                    }
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                if i == j {
                    continue;
                }
                if let Some(m) = &tau_maps[i][j] {
                    let (ti, tj) = match tau.kind {
                        InvolutionKind::Automorphism => (sigma[i], sigma[j]),
                        InvolutionKind::AntiAutomorphism => (sigma[j], sigma[i]),
                    };
                    let src = self.a_prime(i, j);
                    let tgt = self.a_prime(ti, tj);
                    let mapped: Vec<Vec<F::Elem>> = src
                        .basis
                        .iter()
                        .map(|v| crate::linalg::mat_vec(f, m, v))
                        .collect();
                    let mapped = row_space(f, &mapped, self.data.slots[ti][tj].fdim);
                    if mapped != tgt {
                        return Err(Error::Internal(format!(
                            "tau_({},{}) does not preserve A'",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }

        // the compatibility square, on request
        let mut square = None;
        if let Some(jideal) = square_ideal {
            let mut all = true;
            for i in 0..r {
                for j in 0..r {
                    if i == j || self.data.slots[i][j].fdim == 0 {
                        continue;
                    }
                    let ok = self.check_square(tau, &sigma, &p_mats, &tau_maps, i, j, jideal)?;
                    all &= ok;
                }
            }
            square = Some(all);
        }

        Ok(InvolutionReport {
            kind: tau.kind,
            sigma,
            p_mats,
            signs,
            tau: tau_maps,
            square_commutes: square,
        })
    }

    /// Solve psi_i(x) P = P psi_{sigma(i)}^bot(x) over A for an
    /// invertible P (tau maps the i-corner onto the sigma(i)-corner).
    fn solve_conjugator(
        &self,
        tau: &InvolutionSpec<F>,
        sigma: &[usize],
        i: usize,
    ) -> Result<Mat<AElem<F>>> {
        let coeff = &self.data.coeff;
        let f = &coeff.field;
        let di = self.data.block_sizes[i];
        let si = sigma[i];
        let adim = coeff.fdim();
        let unknowns = di * di * adim;
        let mut rows: Vec<Vec<F::Elem>> = Vec::new();
        // corner basis: flat vectors at block (i,i)
        for a in 0..di {
            for b in 0..di {
                for m in 0..adim {
                    let x = self.embed(i, i, a, b, &super::unit_vec(f, adim, m));
                    let psix = self.psi_matrix(i, &x);
                    let tx = tau.apply(f, &x);
                    let psibot = match tau.kind {
                        InvolutionKind::Automorphism => self.psi_matrix(si, &tx),
                        InvolutionKind::AntiAutomorphism => {
                            amat_transpose(&self.psi_matrix(si, &tx))
                        }
                    };
                    // psix P - P psibot = 0: rows indexed by entry (s,t)
                    // and A-coordinate c
                    for s in 0..di {
                        for t in 0..di {
                            for c in 0..adim {
                                let mut row = vec![f.zero(); unknowns];
                                for k in 0..di {
                                    // psix[s][k] * P[k][t]
                                    let coefa = psix.at(s, k);
                                    for cc in 0..adim {
                                        let prod =
                                            coeff.mul(coefa, &coeff.basis_elem(cc));
                                        let idx = (k * di + t) * adim + cc;
                                        row[idx] = f.add(&row[idx], &prod.0[c]);
                                    }
                                    // - P[s][k] * psibot[k][t]
                                    let coefb = psibot.at(k, t);
                                    for cc in 0..adim {
                                        let prod =
                                            coeff.mul(coefb, &coeff.basis_elem(cc));
                                        let idx = (s * di + k) * adim + cc;
                                        row[idx] = f.sub(&row[idx], &prod.0[c]);
                                    }
                                }
                                rows.push(row);
                            }
                        }
                    }
                }
            }
        }
        let msys = Mat::from_rows(rows);
        let sols = kernel_basis(f, &msys);
        // need a residually invertible solution
        let to_amat = |v: &Vec<F::Elem>| -> Mat<AElem<F>> {
            let mut p = Mat::filled(di, di, coeff.zero());
            for k in 0..di {
                for t in 0..di {
                    let mut co = vec![f.zero(); adim];
                    for (c, x) in co.iter_mut().enumerate() {
                        *x = v[(k * di + t) * adim + c].clone();
                    }
                    *p.at_mut(k, t) = AElem(co);
                }
            }
            p
        };
        let residually_invertible = |p: &Mat<AElem<F>>| -> bool {
            let mut res = zeros(f, di, di);
            for a in 0..di {
                for b in 0..di {
                    *res.at_mut(a, b) = coeff.residue(p.at(a, b));
                }
            }
            crate::linalg::inverse(f, &res).is_some()
        };
        let mut cands: Vec<Mat<AElem<F>>> = sols.iter().map(&to_amat).collect();
        let n = cands.len();
        for a in 0..n {
            for b in 0..a {
                let mut s = cands[a].clone();
                for k in 0..di {
                    for t in 0..di {
                        *s.at_mut(k, t) = coeff.add(s.at(k, t), cands[b].at(k, t));
                    }
                }
                cands.push(s);
            }
        }
        cands
            .into_iter()
            .find(residually_invertible)
            .ok_or_else(|| Error::Internal(format!("no invertible conjugator at block {}", i + 1)))
    }

    /// psi_i(x): the (i,i) block of x as a d_i x d_i matrix over A.
    pub fn psi_matrix(&self, i: usize, x: &[F::Elem]) -> Mat<AElem<F>> {
        let coeff = &self.data.coeff;
        let di = self.data.block_sizes[i];
        let mut m = Mat::filled(di, di, coeff.zero());
        for a in 0..di {
            for b in 0..di {
                *m.at_mut(a, b) = AElem(self.extract(x, i, i, a, b));
            }
        }
        m
    }

    /// Embed a d_i x d_i matrix over A into the (i,i) block.
    pub fn embed_amat(&self, i: usize, m: &Mat<AElem<F>>) -> Vec<F::Elem> {
        let alg = &self.psc.alg;
        let mut out = alg.zero_vec();
        for a in 0..m.rows {
            for b in 0..m.cols {
                let v = &m.at(a, b).0;
                for (mm, c) in v.iter().enumerate() {
                    let idx = self.flat_index(i, i, a, b, mm);
                    out[idx] = alg.field.add(&out[idx], c);
                }
            }
        }
        out
    }

    /// The commuting square between functionals and extension classes for
    /// the pair (i, j): bot after iota equals iota after the pullback of
    /// tau^{-1}.
    #[allow(clippy::too_many_arguments)]
    fn check_square(
        &self,
        tau: &InvolutionSpec<F>,
        sigma: &[usize],
        p_mats: &[Mat<AElem<F>>],
        tau_maps: &[Vec<Option<Mat<F::Elem>>>],
        i: usize,
        j: usize,
        jideal: &Ideal<F>,
    ) -> Result<bool> {
        let coeff = &self.data.coeff;
        let f = &coeff.field;
        let alg = &self.psc.alg;
        let (quot, qmap) = super::ops::quotient_algebra(coeff, jideal)?;
        let qd = quot.fdim();
        // a basis of functionals on slot/(A') with values in A/J
        let funcs = self.functional_basis(i, j, jideal)?;
        let (ti, tj) = match tau.kind {
            InvolutionKind::Automorphism => (sigma[i], sigma[j]),
            InvolutionKind::AntiAutomorphism => (sigma[j], sigma[i]),
        };
        let tmat = tau_maps[i][j]
            .as_ref()
            .ok_or_else(|| Error::Internal("missing tau map".into()))?;
        let tinv = crate::linalg::inverse(f, tmat)
            .ok_or_else(|| Error::Internal("tau map not invertible".into()))?;
        let (di, dj) = (self.data.block_sizes[i], self.data.block_sizes[j]);
        for func in &funcs {
            // left-bottom path: g = f after tau^{-1}, then its extension
            // class on the (ti,tj) pair
            let tgt_fdim = self.data.slots[ti][tj].fdim;
            let mut g = vec![vec![f.zero(); qd]; tgt_fdim];
            for (b, gb) in g.iter_mut().enumerate() {
                // tau^{-1}(basis b of target slot) expressed in source slot
                let pre = tinv.col(b);
                for (bb, c) in pre.iter().enumerate() {
                    if f.is_zero(c) {
                        continue;
                    }
                    for (o, x) in gb.iter_mut().zip(&func[bb]) {
                        *o = f.add(o, &f.mul(c, x));
                    }
                }
            }
            // compare classes on every flat basis vector
            for p in 0..alg.dim {
                let x = alg.basis_vec(p);
                // top-right: c'(x) per the bot formula
                let tx = tau.apply(f, &x);
                let cprime: Mat<AElem<F>> = match tau.kind {
                    InvolutionKind::Automorphism => {
                        // P_i c(tau x) P_j^{-1}
                        let c = self.func_block(i, j, func, &qmap, &tx, di, dj);
                        let pi = reduce_amat(coeff, &qmap, &p_mats[i]);
                        let pjinv = amat_inverse(&quot, &reduce_amat(coeff, &qmap, &p_mats[j]))
                            .ok_or_else(|| Error::Internal("P_j not invertible mod J".into()))?;
                        amat_mul(&quot, &amat_mul(&quot, &pi, &c), &pjinv)
                    }
                    InvolutionKind::AntiAutomorphism => {
                        // P_j (c(tau x))^t P_i^{-1}
                        let c = self.func_block(i, j, func, &qmap, &tx, di, dj);
                        let ct = amat_transpose(&c);
                        let pj = reduce_amat(coeff, &qmap, &p_mats[j]);
                        let piinv = amat_inverse(&quot, &reduce_amat(coeff, &qmap, &p_mats[i]))
                            .ok_or_else(|| Error::Internal("P_i not invertible mod J".into()))?;
                        amat_mul(&quot, &amat_mul(&quot, &pj, &ct), &piinv)
                    }
                };
                // bottom: c''(x) = g(a_{ti,tj}(x))
                let (dti, dtj) = (self.data.block_sizes[ti], self.data.block_sizes[tj]);
                let csecond = self.func_block(ti, tj, &g, &qmap, &x, dti, dtj);
                if cprime != csecond {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// f applied entrywise to the (i,j) block of x, over A/J.
    fn func_block(
        &self,
        i: usize,
        j: usize,
        func: &[Vec<F::Elem>],
        qmap: &QuotMap<F>,
        x: &[F::Elem],
        di: usize,
        dj: usize,
    ) -> Mat<AElem<F>> {
        let coeff = &self.data.coeff;
        let f = &coeff.field;
        let qd = qmap.quot.fdim();
        let mut m = Mat::filled(di, dj, qmap.quot.zero());
        for a in 0..di {
            for b in 0..dj {
                let v = self.extract(x, i, j, a, b);
                let mut acc = vec![f.zero(); qd];
                for (bb, c) in v.iter().enumerate() {
                    if f.is_zero(c) {
                        continue;
                    }
                    for (o, t) in acc.iter_mut().zip(&func[bb]) {
                        *o = f.add(o, &f.mul(c, t));
                    }
                }
                *m.at_mut(a, b) = AElem(acc);
            }
        }
        m
    }

    /// A basis of A-linear functionals slot(i,j) -> A/J vanishing on A'.
    pub fn functional_basis(
        &self,
        i: usize,
        j: usize,
        jideal: &Ideal<F>,
    ) -> Result<Vec<Vec<Vec<F::Elem>>>> {
        let coeff = &self.data.coeff;
        let f = &coeff.field;
        let (quot, qmap) = super::ops::quotient_algebra(coeff, jideal)?;
        let qd = quot.fdim();
        let slot = &self.data.slots[i][j];
        let aprime = self.a_prime(i, j);
        let unknowns = slot.fdim * qd;
        let mut rows: Vec<Vec<F::Elem>> = Vec::new();
        for a in 0..coeff.fdim() {
            let ba = coeff.basis_elem(a);
            let ba_red = qmap.reduce(coeff, &ba);
            for xi in 0..slot.fdim {
                let ax = slot.act(coeff, &ba, &super::unit_vec(f, slot.fdim, xi));
                for c in 0..qd {
                    let mut row = vec![f.zero(); unknowns];
                    for (b, co) in ax.iter().enumerate() {
                        if !f.is_zero(co) {
                            row[b * qd + c] = f.add(&row[b * qd + c], co);
                        }
                    }
                    for cc in 0..qd {
                        let prod = quot.mul(&ba_red, &quot.basis_elem(cc));
                        row[xi * qd + cc] = f.sub(&row[xi * qd + cc], &prod.0[c]);
                    }
                    rows.push(row);
                }
            }
        }
        for v in &aprime.basis {
            for c in 0..qd {
                let mut row = vec![f.zero(); unknowns];
                for (b, co) in v.iter().enumerate() {
                    if !f.is_zero(co) {
                        row[b * qd + c] = co.clone();
                    }
                }
                rows.push(row);
            }
        }
        let m = Mat::from_rows(rows);
        Ok(kernel_basis(f, &m)
            .into_iter()
            .map(|v| {
                (0..slot.fdim)
                    .map(|b| (0..qd).map(|c| v[b * qd + c].clone()).collect())
                    .collect()
            })
            .collect())
    }
}

fn identity_amat<F: Field>(coeff: &Artinian<F>, n: usize) -> Mat<AElem<F>> {
    let mut m = Mat::filled(n, n, coeff.zero());
    for i in 0..n {
        *m.at_mut(i, i) = coeff.one();
    }
    m
}

pub fn amat_mul<F: Field>(
    coeff: &Artinian<F>,
    a: &Mat<AElem<F>>,
    b: &Mat<AElem<F>>,
) -> Mat<AElem<F>> {
    let mut out = Mat::filled(a.rows, b.cols, coeff.zero());
    for i in 0..a.rows {
        for k in 0..a.cols {
            for j in 0..b.cols {
                let t = coeff.mul(a.at(i, k), b.at(k, j));
                *out.at_mut(i, j) = coeff.add(out.at(i, j), &t);
            }
        }
    }
    out
}

pub fn amat_transpose<F: Field>(a: &Mat<AElem<F>>) -> Mat<AElem<F>> {
    a.transpose()
}

fn is_scalar_amat<F: Field>(coeff: &Artinian<F>, m: &Mat<AElem<F>>, x: &AElem<F>) -> bool {
    for i in 0..m.rows {
        for j in 0..m.cols {
            let expect = if i == j { x.clone() } else { coeff.zero() };
            if *m.at(i, j) != expect {
                return false;
            }
        }
    }
    true
}

fn reduce_amat<F: Field>(
    coeff: &Artinian<F>,
    qmap: &QuotMap<F>,
    m: &Mat<AElem<F>>,
) -> Mat<AElem<F>> {
    let mut out = Mat::filled(m.rows, m.cols, qmap.quot.zero());
    for i in 0..m.rows {
        for j in 0..m.cols {
            *out.at_mut(i, j) = qmap.reduce(coeff, m.at(i, j));
        }
    }
    out
}

/// Inverse of a matrix over an artinian local ring, via the flattened
/// base-field linear system.
pub fn amat_inverse<F: Field>(coeff: &Artinian<F>, m: &Mat<AElem<F>>) -> Option<Mat<AElem<F>>> {
    let f = &coeff.field;
    let n = m.rows;
    let adim = coeff.fdim();
    // operator x -> M x on A^n as an F-matrix of size n*adim
    let mut big = zeros(f, n * adim, n * adim);
    for i in 0..n {
        for j in 0..n {
            // block (i,j): multiplication by m[i][j] as adim x adim matrix
            for c in 0..adim {
                let prod = coeff.mul(m.at(i, j), &coeff.basis_elem(c));
                for rr in 0..adim {
                    *big.at_mut(i * adim + rr, j * adim + c) = prod.0[rr].clone();
                }
            }
        }
    }
    let inv = crate::linalg::inverse(f, &big)?;
    let mut out = Mat::filled(n, n, coeff.zero());
    for i in 0..n {
        for j in 0..n {
            let mut co = vec![f.zero(); adim];
            for (rr, x) in co.iter_mut().enumerate() {
                *x = inv.at(i * adim + rr, j * adim).clone();
            }
            *out.at_mut(i, j) = AElem(co);
        }
    }
    Some(out)
}

/// Sign analysis over the localized polynomial ring: for an
/// anti-automorphism x -> Q x^t Q^{-1} preserving a standard DVR GMA, the
/// sign is read off from Q^t = sign * Q, and on each swapped block pair
/// the module map tau_{i,j} is multiplication by that sign.
pub fn dvr_involution_sign<F: Field>(
    gma: &crate::gma::dvr::DvrGma<F>,
    q: &Mat<RatFunc<F::Elem>>,
) -> Result<i64> {
    let ring = &gma.ring;
    let ff = ring.fraction_field();
    let d = gma.total_dim();
    if q.rows != d || q.cols != d {
        return Err(Error::Shape("Q size".into()));
    }
    if crate::linalg::inverse(&ff, q).is_none() {
        return Err(Error::Precondition("Q is singular".into()));
    }
    let qt = q.transpose();
    let same = (0..d).all(|i| (0..d).all(|j| qt.at(i, j) == q.at(i, j)));
    if same {
        return Ok(1);
    }
    let neg = (0..d).all(|i| {
        (0..d).all(|j| {
            let n = crate::poly::rf_neg(&ring.base, q.at(i, j));
            qt.at(i, j) == &n
        })
    });
    if neg {
        return Ok(-1);
    }
    Err(Error::Precondition("Q is neither symmetric nor antisymmetric".into()))
}
