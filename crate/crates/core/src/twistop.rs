//! Twisted operators T: V -> g against a (algebra, representation, cocycle)
//! context: verification, the induced bracket on V, morphisms, coboundary
//! shifts, gauge transformations, and the Nijenhuis example package.
//!
//! Contexts travel with operators as aggregate values; gauge and shift
//! operations return fresh operators with fresh contexts rather than mutating
//! anything shared.

use crate::cohomology::{ce_diff, Cochain};
use crate::error::{Error, Result};
use crate::exactla::Vector;
use crate::multiindex::triples;
use crate::report::{Checker, Report};
use crate::structures::{
    check_algebra_morphism, check_cocycle3, check_filippov, check_rep3, one_cochain_coboundary,
    LinearMap, Representation3, ThreeLieAlgebra, TwoCocycle3,
};

/// The data a twisted operator is twisted against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedContext {
    pub g: ThreeLieAlgebra,
    pub rho: Representation3,
    pub theta: TwoCocycle3,
}

impl TwistedContext {
    pub fn new(g: ThreeLieAlgebra, rho: Representation3, theta: TwoCocycle3) -> Result<Self> {
        if rho.alg_dim() != g.dim() || theta.alg_dim() != g.dim() || theta.space_dim() != rho.space_dim() {
            return Err(Error::ShapeMismatch("context shapes do not agree".into()));
        }
        Ok(TwistedContext { g, rho, theta })
    }

    /// Run the three context checkers; error on the first failure.
    pub fn validate(&self) -> Result<()> {
        if !check_filippov(&self.g).passed() {
            return Err(Error::ValidationFailure("context algebra fails the fundamental identity".into()));
        }
        if !check_rep3(&self.g, &self.rho).passed() {
            return Err(Error::ValidationFailure("context representation fails its identities".into()));
        }
        if !check_cocycle3(&self.g, &self.rho, &self.theta).passed() {
            return Err(Error::ValidationFailure("context cocycle fails the cocycle identity".into()));
        }
        Ok(())
    }
}

/// A linear map V -> g bundled with its context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedOperator {
    ctx: TwistedContext,
    t: LinearMap,
}

impl TwistedOperator {
    pub fn new(ctx: TwistedContext, t: LinearMap) -> Result<Self> {
        if t.target_dim() != ctx.g.dim() || t.source_dim() != ctx.rho.space_dim() {
            return Err(Error::ShapeMismatch(format!(
                "operator is {}x{}, context wants {}x{}",
                t.target_dim(),
                t.source_dim(),
                ctx.g.dim(),
                ctx.rho.space_dim()
            )));
        }
        Ok(TwistedOperator { ctx, t })
    }

    pub fn context(&self) -> &TwistedContext {
        &self.ctx
    }

    pub fn map(&self) -> &LinearMap {
        &self.t
    }

    pub fn v_dim(&self) -> usize {
        self.t.source_dim()
    }

    pub fn g_dim(&self) -> usize {
        self.t.target_dim()
    }

    /// Context axioms plus the twisted identity.
    pub fn validate(&self) -> Result<()> {
        self.ctx.validate()?;
        if !check_twisted(self).passed() {
            return Err(Error::ValidationFailure("operator fails the twisted identity".into()));
        }
        Ok(())
    }
}

/// `[Tu, Tv, Tw] = T(rho(Tu,Tv)w + rho(Tv,Tw)u + rho(Tw,Tu)v + theta(Tu,Tv,Tw))`
/// on strictly increasing basis triples of V; both sides are fully skew.
pub fn check_twisted(op: &TwistedOperator) -> Report {
    let mut checker = Checker::new("twisted-operator");
    let vd = op.v_dim();
    let units: Vec<Vector> = (0..vd).map(|i| Vector::unit(vd, i)).collect();
    let tu: Vec<Vector> = (0..vd).map(|i| op.t.apply_basis(i)).collect();
    for t in triples(vd) {
        let [u, v, w] = t;
        let lhs = op.ctx.g.bracket(&tu[u], &tu[v], &tu[w]);
        let rhs = op.t.apply(&induced_bracket_value(op, &units, &tu, u, v, w));
        checker.residual("twisted-identity", &t, &lhs.sub(&rhs));
    }
    checker.finish()
}

/// `[u,v,w]_T = rho(Tu,Tv)w + rho(Tv,Tw)u + rho(Tw,Tu)v + theta(Tu,Tv,Tw)`
/// on basis indices.
fn induced_bracket_value(
    op: &TwistedOperator,
    units: &[Vector],
    tu: &[Vector],
    u: usize,
    v: usize,
    w: usize,
) -> Vector {
    let mut out = op.ctx.rho.apply(&tu[u], &tu[v], &units[w]);
    out.add_assign(&op.ctx.rho.apply(&tu[v], &tu[w], &units[u]));
    out.add_assign(&op.ctx.rho.apply(&tu[w], &tu[u], &units[v]));
    out.add_assign(&op.ctx.theta.eval(&tu[u], &tu[v], &tu[w]));
    out
}

/// The 3-Lie structure on V carried by the graph of a twisted operator.
/// Verifies the fundamental identity of the result and that T intertwines
/// the induced bracket with the bracket of g.
pub fn induced_bracket(op: &TwistedOperator) -> Result<ThreeLieAlgebra> {
    if !check_twisted(op).passed() {
        return Err(Error::ValidationFailure("operator fails the twisted identity".into()));
    }
    let vd = op.v_dim();
    let units: Vec<Vector> = (0..vd).map(|i| Vector::unit(vd, i)).collect();
    let tu: Vec<Vector> = (0..vd).map(|i| op.t.apply_basis(i)).collect();
    let alg = ThreeLieAlgebra::new(
        vd,
        triples(vd)
            .into_iter()
            .map(|[u, v, w]| ([u, v, w], induced_bracket_value(op, &units, &tu, u, v, w))),
    )?;
    if !check_filippov(&alg).passed() {
        return Err(Error::ValidationFailure("induced bracket fails the fundamental identity".into()));
    }
    if !check_algebra_morphism(&alg, &op.ctx.g, &op.t).passed() {
        return Err(Error::ValidationFailure("operator does not intertwine the induced bracket".into()));
    }
    Ok(alg)
}

/// A pair of maps relating two twisted operators.
#[derive(Debug, Clone)]
pub struct TwistedMorphism {
    pub phi: LinearMap,
    pub psi: LinearMap,
}

/// Morphism conditions between twisted operators: phi is a morphism of the
/// underlying algebras, psi intertwines the representations along phi, psi
/// carries one cocycle to the other, and phi T = T' psi.
pub fn check_twisted_morphism(
    m: &TwistedMorphism,
    op: &TwistedOperator,
    op2: &TwistedOperator,
) -> Report {
    let mut checker = Checker::new("twisted-morphism");
    if m.phi.source_dim() != op.g_dim()
        || m.phi.target_dim() != op2.g_dim()
        || m.psi.source_dim() != op.v_dim()
        || m.psi.target_dim() != op2.v_dim()
    {
        return Report::error("twisted-morphism", "morphism shape mismatch");
    }
    let (gd, vd) = (op.g_dim(), op.v_dim());
    let phi_e: Vec<Vector> = (0..gd).map(|i| m.phi.apply_basis(i)).collect();

    // phi is a morphism of 3-Lie algebras.
    let alg_report = check_algebra_morphism(&op.ctx.g, &op2.ctx.g, &m.phi);
    for v in alg_report.details {
        checker.residual(
            "morphism-algebra",
            &v.indices,
            &Vector::new(v.residual.iter().map(|s| crate::exactla::parse_rational(s).unwrap()).collect()),
        );
    }

    // psi(rho(x,y)u) = rho'(phi x, phi y) psi(u) on basis pairs and basis u.
    for i in 0..gd {
        for j in (i + 1)..gd {
            let lhs = m.psi.matrix().mul(&op.ctx.rho.mat_basis(i, j));
            let rhs = op2.ctx.rho.mat_of(&phi_e[i], &phi_e[j]).mul(m.psi.matrix());
            let diff = lhs.sub(&rhs);
            for u in 0..vd {
                checker.residual("morphism-representation", &[i, j, u], &diff.col(u));
            }
        }
    }

    // psi . theta = theta' . (phi x phi x phi) on basis triples.
    for t in triples(gd) {
        let lhs = m.psi.apply(&op.ctx.theta.eval_basis(t[0], t[1], t[2]));
        let rhs = op2.ctx.theta.eval(&phi_e[t[0]], &phi_e[t[1]], &phi_e[t[2]]);
        checker.residual("morphism-cocycle", &t, &lhs.sub(&rhs));
    }

    // phi . T = T' . psi.
    let diff = m.phi.compose(&op.t).sub(&op2.t.compose(&m.psi));
    for u in 0..vd {
        checker.residual("morphism-operator", &[u], &diff.matrix().col(u));
    }
    checker.finish()
}

/// Shift an operator along an arbitrary 1-cochain: if `Id_V - theta1 T` is
/// invertible, `T (Id_V - theta1 T)^{-1}` is twisted against the context
/// with cocycle `theta + d theta1`.
pub fn coboundary_shift(op: &TwistedOperator, theta1: &LinearMap) -> Result<TwistedOperator> {
    if theta1.source_dim() != op.g_dim() || theta1.target_dim() != op.v_dim() {
        return Err(Error::ShapeMismatch("1-cochain has wrong shape".into()));
    }
    let m = LinearMap::identity(op.v_dim()).sub(&theta1.compose(&op.t));
    let m_inv = m
        .inverse()
        .map_err(|_| Error::NotInvertible("Id - theta1 T is singular".into()))?;
    let shifted_theta = op
        .ctx
        .theta
        .add(&one_cochain_coboundary(&op.ctx.g, &op.ctx.rho, theta1)?)?;
    let out = TwistedOperator::new(
        TwistedContext::new(op.ctx.g.clone(), op.ctx.rho.clone(), shifted_theta)?,
        op.t.compose(&m_inv),
    )?;
    if !check_twisted(&out).passed() {
        return Err(Error::ValidationFailure(
            "shifted operator fails the twisted identity in the shifted context".into(),
        ));
    }
    Ok(out)
}

/// Is `theta1` a closed 1-cochain of the plain complex of (g, rho)?
fn is_one_cocycle(op: &TwistedOperator, theta1: &LinearMap) -> Result<bool> {
    if theta1.source_dim() != op.g_dim() || theta1.target_dim() != op.v_dim() {
        return Err(Error::ShapeMismatch("1-cochain has wrong shape".into()));
    }
    let f = Cochain::from_linear_map(theta1);
    Ok(ce_diff(&op.ctx.g, &op.ctx.rho, &f)?.is_zero())
}

/// A 1-cocycle `theta1` is T-admissible when `Id_V + theta1 T` is
/// invertible. Errors if `theta1` is not closed.
pub fn check_admissible(op: &TwistedOperator, theta1: &LinearMap) -> Result<bool> {
    if !is_one_cocycle(op, theta1)? {
        return Err(Error::NotAdmissible("the 1-cochain is not closed".into()));
    }
    let m = LinearMap::identity(op.v_dim()).add(&theta1.compose(&op.t));
    Ok(m.inverse().is_ok())
}

/// Gauge transformation by a T-admissible 1-cocycle:
/// `T (Id_V + theta1 T)^{-1}` in the same context. The result satisfies the
/// twisted identity and `Id_V + theta1 T` intertwines the induced brackets
/// of the two operators; both facts are checked.
pub fn gauge_transform(op: &TwistedOperator, theta1: &LinearMap) -> Result<TwistedOperator> {
    if !check_admissible(op, theta1)? {
        return Err(Error::NotAdmissible("Id + theta1 T is singular".into()));
    }
    let m = LinearMap::identity(op.v_dim()).add(&theta1.compose(&op.t));
    let out = TwistedOperator::new(op.ctx.clone(), op.t.compose(&m.inverse()?))?;
    if !check_twisted(&out).passed() {
        return Err(Error::ValidationFailure("gauge transform fails the twisted identity".into()));
    }
    let before = induced_bracket(op)?;
    let after = induced_bracket(&out)?;
    if !check_algebra_morphism(&before, &after, &m).passed() {
        return Err(Error::ValidationFailure(
            "Id + theta1 T does not intertwine the induced brackets".into(),
        ));
    }
    Ok(out)
}

/// Invert a 1-cochain: `T = theta0^{-1}` is twisted against the cocycle
/// `-d theta0`.
pub fn inverse_cochain_operator(
    g: &ThreeLieAlgebra,
    rho: &Representation3,
    theta0: &LinearMap,
) -> Result<TwistedOperator> {
    if theta0.source_dim() != g.dim() || theta0.target_dim() != rho.space_dim() {
        return Err(Error::ShapeMismatch("1-cochain has wrong shape".into()));
    }
    let t = theta0.inverse()?;
    let theta = one_cochain_coboundary(g, rho, theta0)?.neg();
    let out = TwistedOperator::new(TwistedContext::new(g.clone(), rho.clone(), theta)?, t)?;
    if !check_twisted(&out).passed() {
        return Err(Error::ValidationFailure(
            "inverse cochain operator fails the twisted identity".into(),
        ));
    }
    Ok(out)
}

/// Nijenhuis condition on basis triples:
/// `[Nx,Ny,Nz] = N([Nx,Ny,z] + [Nx,y,Nz] + [x,Ny,Nz]
///               - N([Nx,y,z] + [x,Ny,z] + [x,y,Nz]) + N^2 [x,y,z])`.
pub fn nijenhuis_check(g: &ThreeLieAlgebra, n: &LinearMap) -> Report {
    let mut checker = Checker::new("nijenhuis");
    if n.source_dim() != g.dim() || n.target_dim() != g.dim() {
        return Report::error("nijenhuis", "operator shape mismatch");
    }
    let units: Vec<Vector> = (0..g.dim()).map(|i| Vector::unit(g.dim(), i)).collect();
    let ne: Vec<Vector> = (0..g.dim()).map(|i| n.apply_basis(i)).collect();
    for t in triples(g.dim()) {
        let [i, j, k] = t;
        let (x, y, z) = (&units[i], &units[j], &units[k]);
        let (nx, ny, nz) = (&ne[i], &ne[j], &ne[k]);
        let lhs = g.bracket(nx, ny, nz);
        let mut inner = g.bracket(nx, ny, z);
        inner.add_assign(&g.bracket(nx, y, nz));
        inner.add_assign(&g.bracket(x, ny, nz));
        let mut once = g.bracket(nx, y, z);
        once.add_assign(&g.bracket(x, ny, z));
        once.add_assign(&g.bracket(x, y, nz));
        inner = inner.sub(&n.apply(&once));
        inner.add_assign(&n.apply(&n.apply(&g.bracket(x, y, z))));
        checker.residual("nijenhuis", &t, &lhs.sub(&n.apply(&inner)));
    }
    checker.finish()
}

/// Everything a Nijenhuis operator induces: the deformed algebra, the
/// representation of it on the underlying space, the cocycle, and the
/// identity map as a twisted operator.
#[derive(Debug, Clone)]
pub struct NijenhuisPackage {
    pub deformed: ThreeLieAlgebra,
    pub rep: Representation3,
    pub cocycle: TwoCocycle3,
    pub op: TwistedOperator,
}

/// Deformed bracket of a Nijenhuis operator on basis indices.
fn nijenhuis_deformed_bracket(g: &ThreeLieAlgebra, n: &LinearMap, i: usize, j: usize, k: usize) -> Vector {
    let units: Vec<Vector> = (0..g.dim()).map(|p| Vector::unit(g.dim(), p)).collect();
    let (x, y, z) = (&units[i], &units[j], &units[k]);
    let (nx, ny, nz) = (&n.apply_basis(i), &n.apply_basis(j), &n.apply_basis(k));
    let mut out = g.bracket(nx, ny, z);
    out.add_assign(&g.bracket(nx, y, nz));
    out.add_assign(&g.bracket(x, ny, nz));
    out.sub(&n.apply(&nijenhuis_cocycle_inner(g, n, x, y, z, nx, ny, nz)))
}

/// `[Nx,y,z] + [x,Ny,z] + [x,y,Nz] - N[x,y,z]` (whose -N image is the
/// cocycle value).
fn nijenhuis_cocycle_inner(
    g: &ThreeLieAlgebra,
    n: &LinearMap,
    x: &Vector,
    y: &Vector,
    z: &Vector,
    nx: &Vector,
    ny: &Vector,
    nz: &Vector,
) -> Vector {
    let mut out = g.bracket(nx, y, z);
    out.add_assign(&g.bracket(x, ny, z));
    out.add_assign(&g.bracket(x, y, nz));
    out.sub(&n.apply(&g.bracket(x, y, z)))
}

/// Build the deformed algebra g_N, the representation
/// `rho(x,y)z = [Nx,Ny,z]` of g_N on g, the cocycle
/// `theta(x,y,z) = -N([Nx,y,z] + [x,Ny,z] + [x,y,Nz] - N[x,y,z])`, and the
/// identity map as a twisted operator. All four outputs are validated.
pub fn nijenhuis_package(g: &ThreeLieAlgebra, n: &LinearMap) -> Result<NijenhuisPackage> {
    if !nijenhuis_check(g, n).passed() {
        return Err(Error::NotNijenhuis("operator fails the Nijenhuis condition".into()));
    }
    let dim = g.dim();
    let units: Vec<Vector> = (0..dim).map(|i| Vector::unit(dim, i)).collect();
    let ne: Vec<Vector> = (0..dim).map(|i| n.apply_basis(i)).collect();

    let deformed = ThreeLieAlgebra::new(
        dim,
        triples(dim)
            .into_iter()
            .map(|[i, j, k]| ([i, j, k], nijenhuis_deformed_bracket(g, n, i, j, k))),
    )?;
    let rep = Representation3::from_fn(dim, dim, |i, j| {
        crate::exactla::Mat::from_cols(
            &(0..dim).map(|k| g.bracket(&ne[i], &ne[j], &units[k])).collect::<Vec<_>>(),
        )
    })?;
    let cocycle = TwoCocycle3::from_fn(dim, dim, |i, j, k| {
        n.apply(&nijenhuis_cocycle_inner(g, n, &units[i], &units[j], &units[k], &ne[i], &ne[j], &ne[k]))
            .neg()
    })?;

    if !check_filippov(&deformed).passed() {
        return Err(Error::ValidationFailure("deformed bracket fails the fundamental identity".into()));
    }
    if !check_rep3(&deformed, &rep).passed() {
        return Err(Error::ValidationFailure(
            "left multiplication by N-images is not a representation of the deformed algebra".into(),
        ));
    }
    if !check_cocycle3(&deformed, &rep, &cocycle).passed() {
        return Err(Error::ValidationFailure("induced cocycle fails the cocycle identity".into()));
    }
    let op = TwistedOperator::new(
        TwistedContext::new(deformed.clone(), rep.clone(), cocycle.clone())?,
        LinearMap::identity(dim),
    )?;
    if !check_twisted(&op).passed() {
        return Err(Error::ValidationFailure("identity map fails the twisted identity".into()));
    }
    Ok(NijenhuisPackage { deformed, rep, cocycle, op })
}
