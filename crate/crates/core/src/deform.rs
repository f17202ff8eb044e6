//! Infinitesimal and truncated formal deformations of a twisted operator.
//!
//! The authoritative deformation conditions are the uniform coefficient
//! equations obtained by expanding the twisted identity for the whole family
//! `T_t = T + t T_1 + ... + t^k T_k` and collecting powers of t: at degree s,
//!
//! `sum_{i+j+k=s} [T_i u, T_j v, T_k w]
//!  = sum_{i+j+k=s} T_i(rho(T_j u, T_k v)w + rho(T_j v, T_k w)u + rho(T_j w, T_k u)v)
//!  + sum_{i+j+k+m=s} T_i theta(T_j u, T_k v, T_m w)`.
//!
//! Every condition checked here is derived from that expansion; the degree-1
//! equation coincides with closedness of T_1 in the twisted complex.

use std::collections::BTreeMap;

use crate::cohomology::{
    wedge_bracket, wedge_rho, wedge_theta, Cochain, TwistedComplex, ZeroCochain,
};
use crate::error::{Error, Result};
use crate::exactla::{reduce_mod_echelon, Mat, Vector};
use crate::multiindex::triples;
use crate::report::{Checker, Outcome, Report, Stats, Violation};
use crate::structures::LinearMap;
use crate::twistop::{check_twisted, TwistedOperator};

/// A truncated family `T + t T_1 + ... + t^k T_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationFamily {
    base: TwistedOperator,
    terms: Vec<LinearMap>,
}

impl DeformationFamily {
    pub fn new(base: TwistedOperator, terms: Vec<LinearMap>) -> Result<Self> {
        for (i, t) in terms.iter().enumerate() {
            if t.source_dim() != base.v_dim() || t.target_dim() != base.g_dim() {
                return Err(Error::ShapeMismatch(format!(
                    "family term {} has shape {}x{}, expected {}x{}",
                    i + 1,
                    t.target_dim(),
                    t.source_dim(),
                    base.g_dim(),
                    base.v_dim()
                )));
            }
        }
        Ok(DeformationFamily { base, terms })
    }

    pub fn base(&self) -> &TwistedOperator {
        &self.base
    }

    pub fn terms(&self) -> &[LinearMap] {
        &self.terms
    }

    /// Truncation order k.
    pub fn order(&self) -> usize {
        self.terms.len()
    }

    /// `T_i`, with `T_0` the base operator and zero beyond the truncation.
    pub fn coefficient(&self, i: usize) -> LinearMap {
        if i == 0 {
            self.base.map().clone()
        } else if i <= self.terms.len() {
            self.terms[i - 1].clone()
        } else {
            LinearMap::zero(self.base.g_dim(), self.base.v_dim())
        }
    }

    /// Largest degree with any nonvacuous coefficient equation. The bracket
    /// and representation sums stop at 3k; the cocycle sum runs to 4k.
    pub fn max_order(&self) -> usize {
        let k = self.order();
        (3 * (k + 1)).max(4 * k)
    }
}

/// Degree-s coefficient equation of the family on all basis triples of V.
pub fn order_conditions(fam: &DeformationFamily, s: usize) -> Report {
    let base = &fam.base;
    let ctx = base.context();
    let vd = base.v_dim();
    let units: Vec<Vector> = (0..vd).map(|i| Vector::unit(vd, i)).collect();
    // T_i on basis vectors, indexed [i][basis]; i ranges over 0..=k.
    let k = fam.order();
    let images: Vec<Vec<Vector>> = (0..=k)
        .map(|i| {
            let t = fam.coefficient(i);
            (0..vd).map(|b| t.apply_basis(b)).collect()
        })
        .collect();
    let t_maps: Vec<LinearMap> = (0..=k).map(|i| fam.coefficient(i)).collect();

    let mut checker = Checker::new(format!("order-{s}"));
    for t in triples(vd) {
        let [u, v, w] = t;
        let mut res = Vector::zero(base.g_dim());

        // Bracket side.
        for i in 0..=k.min(s) {
            for j in 0..=k.min(s - i) {
                let m = s - i - j;
                if m > k {
                    continue;
                }
                res.add_assign(&ctx.g.bracket(&images[i][u], &images[j][v], &images[m][w]));
            }
        }

        // Representation side.
        for i in 0..=k.min(s) {
            for j in 0..=k.min(s - i) {
                let m = s - i - j;
                if m > k {
                    continue;
                }
                let mut inner = ctx.rho.apply(&images[j][u], &images[m][v], &units[w]);
                inner.add_assign(&ctx.rho.apply(&images[j][v], &images[m][w], &units[u]));
                inner.add_assign(&ctx.rho.apply(&images[j][w], &images[m][u], &units[v]));
                res = res.sub(&t_maps[i].apply(&inner));
            }
        }

        // Cocycle side.
        for i in 0..=k.min(s) {
            for j in 0..=k.min(s - i) {
                for l in 0..=k.min(s - i - j) {
                    let m = s - i - j - l;
                    if m > k {
                        continue;
                    }
                    let inner = ctx.theta.eval(&images[j][u], &images[l][v], &images[m][w]);
                    res = res.sub(&t_maps[i].apply(&inner));
                }
            }
        }

        checker.residual(&format!("order-{s}"), &t, &res);
    }
    checker.finish()
}

fn merge_reports(subject: &str, reports: Vec<Report>) -> Report {
    let mut details: Vec<Violation> = Vec::new();
    let mut checked = 0usize;
    let mut outcome = Outcome::Pass;
    for r in reports {
        checked += r.stats.checked;
        if r.outcome != Outcome::Pass {
            outcome = Outcome::Fail;
        }
        details.extend(r.details);
    }
    Report {
        subject: subject.to_string(),
        outcome,
        details,
        stats: Stats { checked },
    }
}

/// The four one-term conditions in their historically printed groupings,
/// kept as a secondary cross-check against the derived coefficient system.
/// The degree-3 grouping applies the base operator where the expansion
/// produces the deformation direction, so the two systems genuinely differ
/// there on generic inputs; [`cross_check_printed_conditions`] reports every
/// degree at which the residuals disagree instead of hiding it.
pub fn printed_order_conditions(base: &TwistedOperator, t1: &LinearMap, s: usize) -> Result<Report> {
    if !(1..=4).contains(&s) {
        return Err(Error::ShapeMismatch(format!(
            "printed conditions exist for degrees 1..=4, not {s}"
        )));
    }
    let ctx = base.context();
    let vd = base.v_dim();
    let t = base.map();
    let units: Vec<Vector> = (0..vd).map(|i| Vector::unit(vd, i)).collect();
    let tb: Vec<Vector> = (0..vd).map(|i| t.apply_basis(i)).collect();
    let t1b: Vec<Vector> = (0..vd).map(|i| t1.apply_basis(i)).collect();

    let mut checker = Checker::new(format!("printed-order-{s}"));
    for tri in triples(vd) {
        let [u, v, w] = tri;
        let res = match s {
            1 => {
                let mut lhs = ctx.g.bracket(&tb[u], &tb[v], &t1b[w]);
                lhs.add_assign(&ctx.g.bracket(&tb[u], &t1b[v], &tb[w]));
                lhs.add_assign(&ctx.g.bracket(&t1b[u], &tb[v], &tb[w]));
                let mut mixed = ctx.rho.apply(&tb[u], &t1b[v], &units[w]);
                mixed.add_assign(&ctx.rho.apply(&t1b[u], &tb[v], &units[w]));
                mixed.add_assign(&ctx.rho.apply(&tb[v], &t1b[w], &units[u]));
                mixed.add_assign(&ctx.rho.apply(&t1b[v], &tb[w], &units[u]));
                mixed.add_assign(&ctx.rho.apply(&tb[w], &t1b[u], &units[v]));
                mixed.add_assign(&ctx.rho.apply(&t1b[w], &tb[u], &units[v]));
                mixed.add_assign(&ctx.theta.eval(&tb[u], &tb[v], &t1b[w]));
                mixed.add_assign(&ctx.theta.eval(&tb[u], &t1b[v], &tb[w]));
                mixed.add_assign(&ctx.theta.eval(&t1b[u], &tb[v], &tb[w]));
                let mut plain = ctx.rho.apply(&tb[u], &tb[v], &units[w]);
                plain.add_assign(&ctx.rho.apply(&tb[v], &tb[w], &units[u]));
                plain.add_assign(&ctx.rho.apply(&tb[w], &tb[u], &units[v]));
                plain.add_assign(&ctx.theta.eval(&tb[u], &tb[v], &tb[w]));
                lhs.sub(&t.apply(&mixed)).sub(&t1.apply(&plain))
            }
            2 => {
                let mut lhs = ctx.g.bracket(&tb[u], &t1b[v], &t1b[w]);
                lhs.add_assign(&ctx.g.bracket(&t1b[u], &tb[v], &t1b[w]));
                lhs.add_assign(&ctx.g.bracket(&t1b[u], &t1b[v], &tb[w]));
                let mut quad = ctx.rho.apply(&t1b[u], &t1b[v], &units[w]);
                quad.add_assign(&ctx.rho.apply(&t1b[v], &t1b[w], &units[u]));
                quad.add_assign(&ctx.rho.apply(&t1b[w], &t1b[u], &units[v]));
                quad.add_assign(&ctx.theta.eval(&tb[u], &t1b[v], &t1b[w]));
                quad.add_assign(&ctx.theta.eval(&t1b[u], &tb[v], &t1b[w]));
                quad.add_assign(&ctx.theta.eval(&t1b[u], &t1b[v], &tb[w]));
                let mut mixed = ctx.rho.apply(&tb[u], &t1b[v], &units[w]);
                mixed.add_assign(&ctx.rho.apply(&t1b[u], &tb[v], &units[w]));
                mixed.add_assign(&ctx.rho.apply(&tb[v], &t1b[w], &units[u]));
                mixed.add_assign(&ctx.rho.apply(&t1b[v], &tb[w], &units[u]));
                mixed.add_assign(&ctx.rho.apply(&tb[w], &t1b[u], &units[v]));
                mixed.add_assign(&ctx.rho.apply(&t1b[w], &tb[u], &units[v]));
                mixed.add_assign(&ctx.theta.eval(&tb[u], &tb[v], &t1b[w]));
                mixed.add_assign(&ctx.theta.eval(&tb[u], &t1b[v], &tb[w]));
                mixed.add_assign(&ctx.theta.eval(&t1b[u], &tb[v], &tb[w]));
                lhs.sub(&t.apply(&quad)).sub(&t1.apply(&mixed))
            }
            3 => {
                // As printed, the whole right side sits under the base
                // operator.
                let lhs = ctx.g.bracket(&t1b[u], &t1b[v], &t1b[w]);
                let mut inner = ctx.theta.eval(&t1b[u], &t1b[v], &t1b[w]);
                inner.add_assign(&ctx.rho.apply(&t1b[u], &t1b[v], &units[w]));
                inner.add_assign(&ctx.rho.apply(&t1b[v], &t1b[w], &units[u]));
                inner.add_assign(&ctx.rho.apply(&t1b[w], &t1b[u], &units[v]));
                inner.add_assign(&ctx.theta.eval(&tb[u], &t1b[v], &t1b[w]));
                inner.add_assign(&ctx.theta.eval(&t1b[u], &tb[v], &t1b[w]));
                inner.add_assign(&ctx.theta.eval(&t1b[u], &t1b[v], &tb[w]));
                lhs.sub(&t.apply(&inner))
            }
            // The printed degree-4 display reads `T1(theta(...)) = 0`;
            // orient it like the derived residuals (bracket side minus
            // operator side) so the cross-check compares substance, not a
            // sign convention.
            _ => t1.apply(&ctx.theta.eval(&t1b[u], &t1b[v], &t1b[w])).neg(),
        };
        checker.residual(&format!("printed-order-{s}"), &tri, &res);
    }
    Ok(checker.finish())
}

/// Degrees (1..=4) at which the printed one-term groupings disagree with
/// the derived coefficient equations, tuple by tuple. Empty means the two
/// systems coincide on this input.
pub fn cross_check_printed_conditions(base: &TwistedOperator, t1: &LinearMap) -> Result<Vec<usize>> {
    let fam = DeformationFamily::new(base.clone(), vec![t1.clone()])?;
    let mut disagreements = Vec::new();
    for s in 1..=4 {
        let derived = order_conditions(&fam, s);
        let printed = printed_order_conditions(base, t1, s)?;
        // Both checkers walk triples in the same order; compare the located
        // residuals, ignoring the identity labels.
        let key = |r: &Report| -> Vec<(Vec<usize>, Vec<String>)> {
            r.details
                .iter()
                .map(|v| (v.indices.clone(), v.residual.clone()))
                .collect()
        };
        if key(&derived) != key(&printed) {
            disagreements.push(s);
        }
    }
    Ok(disagreements)
}

/// Does `T + t T_1` satisfy the twisted identity for every t? Runs the
/// coefficient equations for s = 1..=4 on the one-term family (s = 0 is the
/// base identity, rechecked first).
pub fn infinitesimal_check(base: &TwistedOperator, t1: &LinearMap) -> Result<Report> {
    let fam = DeformationFamily::new(base.clone(), vec![t1.clone()])?;
    if !check_twisted(base).passed() {
        return Err(Error::ValidationFailure("base operator fails the twisted identity".into()));
    }
    let reports = (1..=4).map(|s| order_conditions(&fam, s)).collect();
    Ok(merge_reports("infinitesimal", reports))
}

/// Canonical representative of the class of a closed direction `t1` in
/// degree-1 twisted cohomology: `t1` reduced against the coboundary echelon
/// basis.
pub fn one_cocycle_class(base: &TwistedOperator, t1: &LinearMap) -> Result<Cochain> {
    let complex = TwistedComplex::new(base)?;
    let f = Cochain::from_linear_map(t1);
    if f.space() != complex.space(1) {
        return Err(Error::ShapeMismatch("direction has wrong shape".into()));
    }
    if !complex.diff(&f)?.is_zero() {
        return Err(Error::ValidationFailure("direction is not closed".into()));
    }
    let (basis, pivots) = complex.coboundary_echelon(1)?;
    let reduced = reduce_mod_echelon(&basis, &pivots, &f.coeff_vector());
    Cochain::from_coeff_vector(complex.space(1), &reduced)
}

/// `psi_1 = rho(X)(-) + theta(X, T-)` as a matrix on V.
fn psi_one(base: &TwistedOperator, x: &ZeroCochain) -> LinearMap {
    let ctx = base.context();
    let vd = base.v_dim();
    let cols: Vec<Vector> = (0..vd)
        .map(|i| {
            let u = Vector::unit(vd, i);
            let mut out = wedge_rho(&ctx.rho, x).mul_vec(&u);
            out.add_assign(&wedge_theta(&ctx.theta, x, &base.map().apply(&u)));
            out
        })
        .collect();
    LinearMap::new(Mat::from_cols(&cols))
}

/// `phi_1 = [X, -]` as a matrix on g.
fn phi_one(base: &TwistedOperator, x: &ZeroCochain) -> LinearMap {
    let ctx = base.context();
    let gd = base.g_dim();
    let cols: Vec<Vector> = (0..gd)
        .map(|i| wedge_bracket(&ctx.g, x, &Vector::unit(gd, i)))
        .collect();
    LinearMap::new(Mat::from_cols(&cols))
}

/// All coefficient conditions for `(Id + t[X,-], Id + t(rho(X)(-) + theta(X,T-)))`
/// to be a morphism from `T + t T_1` to `T + t T_1'`:
///
/// * the t^2 and t^3 coefficients of the algebra-morphism condition on phi
///   (the t^1 coefficient is the fundamental identity and holds for free),
/// * the t^1..t^3 coefficients of the representation-intertwining condition,
/// * the t^1..t^3 coefficients of the cocycle-compatibility condition,
/// * both coefficients of `phi_t T_t = T_t' psi_t`,
/// * and, on pass, that `T_1 - T_1'` equals the degree-0 coboundary of X.
pub fn equivalence_check_infinitesimal(
    base: &TwistedOperator,
    t1: &LinearMap,
    t1_prime: &LinearMap,
    x: &ZeroCochain,
) -> Result<Report> {
    if !infinitesimal_check(base, t1)?.passed() || !infinitesimal_check(base, t1_prime)?.passed() {
        return Err(Error::ValidationFailure(
            "both directions must generate infinitesimal deformations".into(),
        ));
    }
    if x.dim() != base.g_dim() {
        return Err(Error::ShapeMismatch("wedge element has wrong dimension".into()));
    }
    let ctx = base.context();
    let (gd, vd) = (base.g_dim(), base.v_dim());
    let g_units: Vec<Vector> = (0..gd).map(|i| Vector::unit(gd, i)).collect();
    let xz: Vec<Vector> = (0..gd).map(|i| wedge_bracket(&ctx.g, x, &g_units[i])).collect();
    let psi1 = psi_one(base, x);
    let t = base.map();

    let mut checker = Checker::new("infinitesimal-equivalence");

    // phi-morphism coefficients t^2 and t^3 on raw basis triples.
    for i in 0..gd {
        for j in 0..gd {
            for k in 0..gd {
                let (z1, z2, z3) = (&g_units[i], &g_units[j], &g_units[k]);
                let mut res = ctx.g.bracket(z1, &xz[j], &xz[k]);
                res.add_assign(&ctx.g.bracket(&xz[i], z2, &xz[k]));
                res.add_assign(&ctx.g.bracket(&xz[i], &xz[j], z3));
                checker.residual("phi-order-2", &[i, j, k], &res);
                checker.residual("phi-order-3", &[i, j, k], &ctx.g.bracket(&xz[i], &xz[j], &xz[k]));
            }
        }
    }

    // Representation-intertwining coefficients on raw basis pairs of g and
    // basis vectors of V.
    for i in 0..gd {
        for j in 0..gd {
            let (z1, z2) = (&g_units[i], &g_units[j]);
            let rho_z = ctx.rho.mat_of(z1, z2);
            let mixed = ctx.rho.mat_of(z1, &xz[j]).add(&ctx.rho.mat_of(&xz[i], z2));
            let rho_xx = ctx.rho.mat_of(&xz[i], &xz[j]);
            for u in 0..vd {
                let uv = Vector::unit(vd, u);

                // theta(X, T rho(z1,z2)u) = rho(z1,z2) theta(X, Tu)
                let lhs = wedge_theta(&ctx.theta, x, &t.apply(&rho_z.mul_vec(&uv)));
                let rhs = rho_z.mul_vec(&wedge_theta(&ctx.theta, x, &t.apply(&uv)));
                checker.residual("psi-rho-order-1", &[i, j, u], &lhs.sub(&rhs));

                // (rho(z1,[X,z2]) + rho([X,z1],z2))(psi_1 u) + rho([X,z1],[X,z2])u = 0
                let mut res = mixed.mul_vec(&psi1.apply(&uv));
                res.add_assign(&rho_xx.mul_vec(&uv));
                checker.residual("psi-rho-order-2", &[i, j, u], &res);

                // rho([X,z1],[X,z2])(psi_1 u) = 0
                checker.residual("psi-rho-order-3", &[i, j, u], &rho_xx.mul_vec(&psi1.apply(&uv)));
            }
        }
    }

    // Cocycle-compatibility coefficients on raw basis triples.
    for i in 0..gd {
        for j in 0..gd {
            for k in 0..gd {
                let (z1, z2, z3) = (&g_units[i], &g_units[j], &g_units[k]);
                let th = ctx.theta.eval(z1, z2, z3);
                let mut lhs = wedge_rho(&ctx.rho, x).mul_vec(&th);
                lhs.add_assign(&wedge_theta(&ctx.theta, x, &t.apply(&th)));
                let mut rhs = ctx.theta.eval(&xz[i], z2, z3);
                rhs.add_assign(&ctx.theta.eval(z1, &xz[j], z3));
                rhs.add_assign(&ctx.theta.eval(z1, z2, &xz[k]));
                checker.residual("psi-theta-order-1", &[i, j, k], &lhs.sub(&rhs));

                let mut res = ctx.theta.eval(z1, &xz[j], &xz[k]);
                res.add_assign(&ctx.theta.eval(&xz[i], z2, &xz[k]));
                res.add_assign(&ctx.theta.eval(&xz[i], &xz[j], z3));
                checker.residual("psi-theta-order-2", &[i, j, k], &res);

                checker.residual(
                    "psi-theta-order-3",
                    &[i, j, k],
                    &ctx.theta.eval(&xz[i], &xz[j], &xz[k]),
                );
            }
        }
    }

    // Operator coefficients of phi_t T_t = T_t' psi_t.
    for u in 0..vd {
        let uv = Vector::unit(vd, u);

        // T_1 u + [X, Tu] = T(psi_1 u) + T_1' u
        let mut lhs = t1.apply(&uv);
        lhs.add_assign(&wedge_bracket(&ctx.g, x, &t.apply(&uv)));
        let mut rhs = t.apply(&psi1.apply(&uv));
        rhs.add_assign(&t1_prime.apply(&uv));
        checker.residual("operator-order-1", &[u], &lhs.sub(&rhs));

        // [X, T_1 u] = T_1'(psi_1 u)
        let lhs = wedge_bracket(&ctx.g, x, &t1.apply(&uv));
        let rhs = t1_prime.apply(&psi1.apply(&uv));
        checker.residual("operator-order-2", &[u], &lhs.sub(&rhs));
    }

    // On pass, the directions differ by the degree-0 coboundary of X.
    if !checker.has_failures() {
        let complex = TwistedComplex::new(base)?;
        let delta = complex.delta(x)?;
        let diff = Cochain::from_linear_map(&t1.sub(t1_prime));
        for u in 0..vd {
            checker.residual(
                "class-difference",
                &[u],
                &diff
                    .eval_basis(&[u])
                    .sub(&delta.eval_basis(&[u])),
            );
        }
    }
    Ok(checker.finish())
}

/// Structure constants of one t-degree of the deformed bracket family on V.
pub type BracketTable = BTreeMap<[usize; 3], Vector>;

/// Result of checking a whole family: per-order reports, the merged verdict,
/// and the coefficient tables of the induced bracket family on V (order 0 is
/// the induced bracket of the base operator).
#[derive(Debug, Clone)]
pub struct FormalReport {
    pub overall: Report,
    pub orders: Vec<Report>,
    pub bracket_family: Vec<BracketTable>,
}

impl FormalReport {
    pub fn passed(&self) -> bool {
        self.overall.passed()
    }
}

/// Check every coefficient equation of the family (s = 0 up to the largest
/// nonvacuous degree) and report the induced deformed bracket family.
pub fn formal_check(fam: &DeformationFamily) -> Result<FormalReport> {
    let orders: Vec<Report> = (0..=fam.max_order()).map(|s| order_conditions(fam, s)).collect();
    let overall = merge_reports("formal-family", orders.clone());

    let base = fam.base();
    let ctx = base.context();
    let vd = base.v_dim();
    let k = fam.order();
    let units: Vec<Vector> = (0..vd).map(|i| Vector::unit(vd, i)).collect();
    let images: Vec<Vec<Vector>> = (0..=k)
        .map(|i| {
            let t = fam.coefficient(i);
            (0..vd).map(|b| t.apply_basis(b)).collect()
        })
        .collect();

    let mut bracket_family = Vec::new();
    for s in 0..=(3 * k) {
        let mut table = BracketTable::new();
        for t in triples(vd) {
            let [u, v, w] = t;
            let mut value = Vector::zero(vd);
            for i in 0..=k.min(s) {
                let j = s - i;
                if j > k {
                    continue;
                }
                let mut inner = ctx.rho.apply(&images[i][u], &images[j][v], &units[w]);
                inner.add_assign(&ctx.rho.apply(&images[i][v], &images[j][w], &units[u]));
                inner.add_assign(&ctx.rho.apply(&images[i][w], &images[j][u], &units[v]));
                value.add_assign(&inner);
            }
            for i in 0..=k.min(s) {
                for j in 0..=k.min(s - i) {
                    let m = s - i - j;
                    if m > k {
                        continue;
                    }
                    value.add_assign(&ctx.theta.eval(&images[i][u], &images[j][v], &images[m][w]));
                }
            }
            if !value.is_zero() {
                table.insert([u, v, w], value);
            }
        }
        bracket_family.push(table);
    }

    Ok(FormalReport { overall, orders, bracket_family })
}

/// Morphism datum between two formal deformations: the wedge element driving
/// the degree-1 maps plus free higher-order components.
#[derive(Debug, Clone)]
pub struct EquivalencePair {
    pub x: ZeroCochain,
    pub higher_phi: Vec<LinearMap>,
    pub higher_psi: Vec<LinearMap>,
}

/// Coefficient-wise morphism conditions between two families up to the
/// given truncation order; on pass, asserts the infinitesimals differ by the
/// coboundary of X.
pub fn equivalence_check_formal(
    fam: &DeformationFamily,
    fam2: &DeformationFamily,
    pair: &EquivalencePair,
    truncation: usize,
) -> Result<Report> {
    if !formal_check(fam)?.passed() || !formal_check(fam2)?.passed() {
        return Err(Error::ValidationFailure("both families must pass the coefficient system".into()));
    }
    let base = fam.base();
    if fam2.base() != base {
        return Err(Error::ValidationFailure("families must share the base operator".into()));
    }
    let ctx = base.context();
    let (gd, vd) = (base.g_dim(), base.v_dim());

    // phi_s and psi_s, zero beyond the provided data.
    let phi = |s: usize| -> LinearMap {
        match s {
            0 => LinearMap::identity(gd),
            1 => phi_one(base, &pair.x),
            _ => pair
                .higher_phi
                .get(s - 2)
                .cloned()
                .unwrap_or_else(|| LinearMap::zero(gd, gd)),
        }
    };
    let psi = |s: usize| -> LinearMap {
        match s {
            0 => LinearMap::identity(vd),
            1 => psi_one(base, &pair.x),
            _ => pair
                .higher_psi
                .get(s - 2)
                .cloned()
                .unwrap_or_else(|| LinearMap::zero(vd, vd)),
        }
    };

    let g_units: Vec<Vector> = (0..gd).map(|i| Vector::unit(gd, i)).collect();
    let mut checker = Checker::new("formal-equivalence");

    for s in 0..=truncation {
        // Operator condition: sum phi_i T_j = sum T'_i psi_j.
        let mut lhs = Mat::zero(gd, vd);
        let mut rhs = Mat::zero(gd, vd);
        for i in 0..=s {
            lhs = lhs.add(&phi(i).compose(&fam.coefficient(s - i)).matrix().clone());
            rhs = rhs.add(&fam2.coefficient(i).compose(&psi(s - i)).matrix().clone());
        }
        let diff = lhs.sub(&rhs);
        for u in 0..vd {
            checker.residual(&format!("operator-order-{s}"), &[u], &diff.col(u));
        }

        // phi_t is a bracket morphism, coefficient-wise.
        for i in 0..gd {
            for j in 0..gd {
                for k in 0..gd {
                    let mut res = phi(s).apply(&ctx.g.bracket(&g_units[i], &g_units[j], &g_units[k]));
                    for a in 0..=s {
                        for b in 0..=(s - a) {
                            let c = s - a - b;
                            res = res.sub(&ctx.g.bracket(
                                &phi(a).apply_basis(i),
                                &phi(b).apply_basis(j),
                                &phi(c).apply_basis(k),
                            ));
                        }
                    }
                    checker.residual(&format!("phi-morphism-order-{s}"), &[i, j, k], &res);
                }
            }
        }

        // psi_t intertwines the representation along phi_t.
        for i in 0..gd {
            for j in 0..gd {
                let rho_z = ctx.rho.mat_basis(i, j);
                for u in 0..vd {
                    let uv = Vector::unit(vd, u);
                    let mut res = psi(s).apply(&rho_z.mul_vec(&uv));
                    for a in 0..=s {
                        for b in 0..=(s - a) {
                            let c = s - a - b;
                            res = res.sub(
                                &ctx.rho
                                    .mat_of(&phi(a).apply_basis(i), &phi(b).apply_basis(j))
                                    .mul_vec(&psi(c).apply(&uv)),
                            );
                        }
                    }
                    checker.residual(&format!("psi-rho-order-{s}"), &[i, j, u], &res);
                }
            }
        }

        // psi_t carries theta to theta along phi_t.
        for i in 0..gd {
            for j in 0..gd {
                for k in 0..gd {
                    let mut res = psi(s).apply(&ctx.theta.eval(&g_units[i], &g_units[j], &g_units[k]));
                    for a in 0..=s {
                        for b in 0..=(s - a) {
                            let c = s - a - b;
                            res = res.sub(&ctx.theta.eval(
                                &phi(a).apply_basis(i),
                                &phi(b).apply_basis(j),
                                &phi(c).apply_basis(k),
                            ));
                        }
                    }
                    checker.residual(&format!("psi-theta-order-{s}"), &[i, j, k], &res);
                }
            }
        }
    }

    // On pass, infinitesimals differ by the coboundary of X.
    if !checker.has_failures() && truncation >= 1 {
        let complex = TwistedComplex::new(base)?;
        let delta = complex.delta(&pair.x)?;
        let diff = fam.coefficient(1).sub(&fam2.coefficient(1));
        for u in 0..vd {
            checker.residual(
                "class-difference",
                &[u],
                &diff.apply_basis(u).sub(&delta.eval_basis(&[u])),
            );
        }
    }
    Ok(checker.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat_int;
    use num_traits::Zero;
    use crate::structures::{Representation3, TwoCocycle3};
    use crate::testfix::*;
    use crate::twistop::{TwistedContext, TwistedOperator};

    /// a3 with the zero representation on V = K^3, zero cocycle, and T the
    /// projection onto span{e1, e2}; three vectors in a plane bracket to
    /// zero, so T is twisted.
    fn plane_op() -> TwistedOperator {
        let g = a3();
        let rho = Representation3::zero(3, 3);
        let theta = TwoCocycle3::zero(3, 3);
        let t = LinearMap::new(mat_i64(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 0]]));
        TwistedOperator::new(TwistedContext::new(g, rho, theta).unwrap(), t).unwrap()
    }

    #[test]
    fn order_zero_is_base_identity() {
        for op in [package_235().op, plane_op(), zero_op_adjoint()] {
            let fam = DeformationFamily::new(op, vec![]).unwrap();
            assert!(order_conditions(&fam, 0).passed());
            // Beyond the base everything is vacuous for a zero-term family
            // only when T alone cannot produce that degree.
            assert!(order_conditions(&fam, 1).passed());
        }
    }

    #[test]
    fn untwisted_term_over_zero_base_passes_every_order() {
        // Base T = 0 with zero cocycle; T1 itself an operator. Only the
        // degree-3 equation has content, and it is the operator identity.
        let op = zero_op_adjoint();
        let t1 = proj_e2_op().map().clone();
        let fam = DeformationFamily::new(op, vec![t1]).unwrap();
        for s in 0..=fam.max_order() {
            assert!(order_conditions(&fam, s).passed(), "failed at order {s}");
        }
    }

    #[test]
    fn order_one_matches_twisted_closedness() {
        let pkg = package_235();
        let complex = crate::cohomology::TwistedComplex::new(&pkg.op).unwrap();
        // Directions: a closed one (from the kernel) and generic ones.
        let m = complex.diff_matrix(1).unwrap();
        let kernel = m.kernel_basis();
        assert!(!kernel.is_empty());
        let space = complex.space(1);
        let mut candidates: Vec<LinearMap> = kernel
            .iter()
            .map(|c| Cochain::from_coeff_vector(space, c).unwrap().to_linear_map())
            .collect();
        candidates.push(LinearMap::new(mat_i64(vec![
            vec![1, 0, 0],
            vec![0, 0, 0],
            vec![0, 0, 0],
        ])));
        candidates.push(LinearMap::new(mat_i64(vec![
            vec![0, 2, 0],
            vec![1, 0, 0],
            vec![0, 0, -1],
        ])));
        let mut seen_closed = false;
        let mut seen_open = false;
        for t1 in candidates {
            let fam = DeformationFamily::new(pkg.op.clone(), vec![t1.clone()]).unwrap();
            let closed = complex.diff(&Cochain::from_linear_map(&t1)).unwrap().is_zero();
            let s1 = order_conditions(&fam, 1).passed();
            assert_eq!(closed, s1);
            seen_closed |= closed;
            seen_open |= !closed;
        }
        assert!(seen_closed && seen_open);
    }

    #[test]
    fn infinitesimal_examples() {
        let pkg = package_235();
        assert!(infinitesimal_check(&pkg.op, &LinearMap::zero(3, 3)).unwrap().passed());

        // Rescaling direction on a context where all brackets vanish.
        let ab = abelian_op(3, 3, mat_i64(vec![vec![1, 2, 0], vec![0, 1, 0], vec![3, 0, 1]]));
        let t1 = ab.map().clone();
        assert!(infinitesimal_check(&ab, &t1).unwrap().passed());

        // Any direction passing s=1..4 is in particular closed.
        let complex = crate::cohomology::TwistedComplex::new(&pkg.op).unwrap();
        let m = complex.diff_matrix(1).unwrap();
        for c in m.kernel_basis() {
            let t1 = Cochain::from_coeff_vector(complex.space(1), &c).unwrap().to_linear_map();
            if infinitesimal_check(&pkg.op, &t1).unwrap().passed() {
                assert!(complex.diff(&Cochain::from_linear_map(&t1)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn cocycle_class_examples() {
        let pkg = package_235();
        let complex = crate::cohomology::TwistedComplex::new(&pkg.op).unwrap();

        // A coboundary reduces to the zero class.
        let x = crate::cohomology::ZeroCochain::single(3, 0, 2);
        let dx = complex.delta(&x).unwrap().to_linear_map();
        let class = one_cocycle_class(&pkg.op, &dx).unwrap();
        assert!(class.is_zero());

        // Class invariance: t1 and t1 + delta(X) share the representative.
        let m = complex.diff_matrix(1).unwrap();
        let kernel = m.kernel_basis();
        let t1 = Cochain::from_coeff_vector(complex.space(1), &kernel[0])
            .unwrap()
            .to_linear_map();
        let shifted = t1.add(&dx);
        let c1 = one_cocycle_class(&pkg.op, &t1).unwrap();
        let c2 = one_cocycle_class(&pkg.op, &shifted).unwrap();
        assert_eq!(c1, c2);

        // Oracle: the representative differs from t1 by a coboundary and has
        // zeros in all pivot coordinates of the coboundary echelon basis.
        let (basis, pivots) = complex.coboundary_echelon(1).unwrap();
        let repr = c1.coeff_vector();
        for &p in &pivots {
            assert!(repr.get(p).is_zero());
        }
        let diff = Cochain::from_linear_map(&t1).coeff_vector().sub(&repr);
        let mut span = basis.clone();
        span.push(diff);
        let (echelon, _) = crate::exactla::echelon_basis(&span);
        assert_eq!(echelon.len(), basis.len());
    }

    #[test]
    fn equivalence_infinitesimal_examples() {
        // Trivial instance.
        let pkg = package_235();
        let zero_dir = LinearMap::zero(3, 3);
        let x0 = crate::cohomology::ZeroCochain::zero(3);
        let report = equivalence_check_infinitesimal(&pkg.op, &zero_dir, &zero_dir, &x0).unwrap();
        assert!(report.passed());

        // Constructed instance with nonzero X on the plane operator:
        // X = e1 ^ e3, T1 = (u -> u_3 e1), T1' = T1 + [X, T-].
        let op = plane_op();
        let x = crate::cohomology::ZeroCochain::single(3, 0, 2);
        let t1 = LinearMap::new(mat_i64(vec![vec![0, 0, 1], vec![0, 0, 0], vec![0, 0, 0]]));
        let complex = crate::cohomology::TwistedComplex::new(&op).unwrap();
        let delta = complex.delta(&x).unwrap().to_linear_map();
        assert!(!delta.matrix().is_zero());
        let t1_prime = t1.sub(&delta);
        let report = equivalence_check_infinitesimal(&op, &t1, &t1_prime, &x).unwrap();
        assert!(report.passed());

        // Classes agree on pass.
        let c1 = one_cocycle_class(&op, &t1).unwrap();
        let c2 = one_cocycle_class(&op, &t1_prime).unwrap();
        assert_eq!(c1, c2);

        // Negative control: corrupt T1' and the operator condition locates it.
        let corrupted = t1_prime.add(&LinearMap::new(mat_i64(vec![
            vec![0, 0, 0],
            vec![0, 0, 1],
            vec![0, 0, 0],
        ])));
        let report = equivalence_check_infinitesimal(&op, &t1, &corrupted, &x).unwrap();
        assert!(!report.passed());
        assert!(report
            .details
            .iter()
            .all(|v| v.identity.starts_with("operator-order")));
    }

    #[test]
    fn formal_check_examples() {
        // Order-0 family is just the base identity.
        let pkg = package_235();
        let fam = DeformationFamily::new(pkg.op.clone(), vec![]).unwrap();
        let report = formal_check(&fam).unwrap();
        assert!(report.passed());
        // Bracket family order 0 is the induced bracket of the base.
        let induced = crate::twistop::induced_bracket(&pkg.op).unwrap();
        assert_eq!(&report.bracket_family[0], induced.table());

        // One-term family passing the infinitesimal suite passes formally.
        let ab = abelian_op(3, 3, mat_i64(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]));
        let fam = DeformationFamily::new(ab.clone(), vec![ab.map().clone()]).unwrap();
        assert!(formal_check(&fam).unwrap().passed());

        // Two-term family violating exactly the degree-2 equation: T1 = 0
        // and T2 not closed.
        let t2 = LinearMap::new(mat_i64(vec![vec![1, 0, 0], vec![0, 0, 0], vec![0, 0, 0]]));
        let complex = crate::cohomology::TwistedComplex::new(&pkg.op).unwrap();
        assert!(!complex.diff(&Cochain::from_linear_map(&t2)).unwrap().is_zero());
        let fam = DeformationFamily::new(pkg.op.clone(), vec![LinearMap::zero(3, 3), t2]).unwrap();
        let report = formal_check(&fam).unwrap();
        assert!(!report.passed());
        assert!(report.orders[0].passed());
        assert!(report.orders[1].passed());
        assert!(!report.orders[2].passed());
    }

    #[test]
    fn formal_equivalence_examples() {
        // Identity pair between equal families.
        let pkg = package_235();
        let fam = DeformationFamily::new(pkg.op.clone(), vec![]).unwrap();
        let pair = EquivalencePair {
            x: crate::cohomology::ZeroCochain::zero(3),
            higher_phi: vec![],
            higher_psi: vec![],
        };
        let report = equivalence_check_formal(&fam, &fam, &pair, 3).unwrap();
        assert!(report.passed());

        // Truncation 0 always passes: the degree-0 condition is T = T.
        let report = equivalence_check_formal(&fam, &fam, &pair, 0).unwrap();
        assert!(report.passed());

        // The constructed infinitesimal instance is also a formal
        // equivalence up to its truncation.
        let op = plane_op();
        let x = crate::cohomology::ZeroCochain::single(3, 0, 2);
        let t1 = LinearMap::new(mat_i64(vec![vec![0, 0, 1], vec![0, 0, 0], vec![0, 0, 0]]));
        let complex = crate::cohomology::TwistedComplex::new(&op).unwrap();
        let delta = complex.delta(&x).unwrap().to_linear_map();
        let t1_prime = t1.sub(&delta);
        let fam1 = DeformationFamily::new(op.clone(), vec![t1.clone()]).unwrap();
        let fam2 = DeformationFamily::new(op.clone(), vec![t1_prime]).unwrap();
        // psi_1 vanishes here (rho = 0, theta = 0), and phi_1 = [X,-]
        // squares to zero on the relevant images, so the bare pair works.
        let pair = EquivalencePair {
            x,
            higher_phi: vec![],
            higher_psi: vec![],
        };
        let report = equivalence_check_formal(&fam1, &fam2, &pair, 6).unwrap();
        assert!(report.passed(), "{:?}", report.details.first());
    }

    #[test]
    fn rescaling_by_identity_term() {
        // T1 = T on the abelian context makes (1 + t)T twisted for all t.
        let ab = abelian_op(2, 2, mat_i64(vec![vec![2, 1], vec![0, 3]]));
        assert!(infinitesimal_check(&ab, &ab.map().clone()).unwrap().passed());
    }

    #[test]
    fn coefficient_indexing() {
        let pkg = package_235();
        let t1 = LinearMap::new(mat_i64(vec![vec![1, 0, 0], vec![0, 0, 0], vec![0, 0, 0]]));
        let fam = DeformationFamily::new(pkg.op.clone(), vec![t1.clone()]).unwrap();
        assert_eq!(fam.coefficient(0), pkg.op.map().clone());
        assert_eq!(fam.coefficient(1), t1);
        assert!(fam.coefficient(2).matrix().is_zero());
        assert_eq!(fam.order(), 1);
        assert_eq!(fam.max_order(), 6);
        assert_eq!(rat_int(0), rat_int(0));
    }
}
