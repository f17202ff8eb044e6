//! NS-type algebras: a ternary variant with two products (one skew only in
//! its first two slots, one fully skew), its binary analogue, subadjacent
//! algebras, and the constructions tying them to twisted and Nijenhuis
//! operators.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactla::{Mat, Vector};
use crate::multiindex::{sort2, sort3, triples};
use crate::report::{Checker, Report};
use crate::structures::{
    check_cocycle3, check_filippov, check_jacobi, check_rep3, LieAlgebra, LinearMap,
    Representation3, ThreeLieAlgebra, TwoCocycle3,
};
use crate::twistop::{
    check_twisted, induced_bracket, nijenhuis_check, TwistedContext, TwistedOperator,
};

fn minor2(
    x: &Vector,
    y: &Vector,
    a: usize,
    b: usize,
) -> crate::exactla::Rational {
    x.get(a) * y.get(b) - x.get(b) * y.get(a)
}

/// Two ternary products: `curly` is skew in its first two slots only,
/// stored on keys `[i, j, k]` with i < j and k free; `bracket2` is fully
/// skew, stored on strictly increasing triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeNSLieAlgebra {
    dim: usize,
    curly: BTreeMap<[usize; 3], Vector>,
    bracket2: BTreeMap<[usize; 3], Vector>,
}

impl ThreeNSLieAlgebra {
    pub fn new(
        dim: usize,
        curly: impl IntoIterator<Item = ([usize; 3], Vector)>,
        bracket2: impl IntoIterator<Item = ([usize; 3], Vector)>,
    ) -> Result<Self> {
        let mut c = BTreeMap::new();
        for (key, value) in curly {
            let [i, j, k] = key;
            if !(i < j && j < dim && k < dim) {
                return Err(Error::ShapeMismatch(format!(
                    "curly key {key:?} must have its first two indices strictly increasing below {dim}"
                )));
            }
            if value.len() != dim {
                return Err(Error::ShapeMismatch("curly value has wrong length".into()));
            }
            if !value.is_zero() && c.insert(key, value).is_some() {
                return Err(Error::ShapeMismatch(format!("duplicate curly key {key:?}")));
            }
        }
        let mut b = BTreeMap::new();
        for (key, value) in bracket2 {
            let [i, j, k] = key;
            if !(i < j && j < k && k < dim) {
                return Err(Error::ShapeMismatch(format!(
                    "bracket key {key:?} is not strictly increasing below {dim}"
                )));
            }
            if value.len() != dim {
                return Err(Error::ShapeMismatch("bracket value has wrong length".into()));
            }
            if !value.is_zero() && b.insert(key, value).is_some() {
                return Err(Error::ShapeMismatch(format!("duplicate bracket key {key:?}")));
            }
        }
        Ok(ThreeNSLieAlgebra { dim, curly: c, bracket2: b })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn curly_table(&self) -> &BTreeMap<[usize; 3], Vector> {
        &self.curly
    }

    pub fn bracket2_table(&self) -> &BTreeMap<[usize; 3], Vector> {
        &self.bracket2
    }

    pub fn curly_basis(&self, i: usize, j: usize, k: usize) -> Vector {
        match sort2(i, j) {
            None => Vector::zero(self.dim),
            Some(([a, b], sign)) => match self.curly.get(&[a, b, k]) {
                None => Vector::zero(self.dim),
                Some(v) => {
                    if sign == 1 {
                        v.clone()
                    } else {
                        v.neg()
                    }
                }
            },
        }
    }

    /// Trilinear extension, skew in the first two arguments only.
    pub fn curly(&self, x: &Vector, y: &Vector, z: &Vector) -> Vector {
        let mut out = Vector::zero(self.dim);
        for (&[a, b, c], value) in &self.curly {
            let coeff = minor2(x, y, a, b) * z.get(c);
            if !num_traits::Zero::is_zero(&coeff) {
                out.add_scaled(&coeff, value);
            }
        }
        out
    }

    pub fn bracket2_basis(&self, i: usize, j: usize, k: usize) -> Vector {
        match sort3(i, j, k) {
            None => Vector::zero(self.dim),
            Some((key, sign)) => match self.bracket2.get(&key) {
                None => Vector::zero(self.dim),
                Some(v) => {
                    if sign == 1 {
                        v.clone()
                    } else {
                        v.neg()
                    }
                }
            },
        }
    }

    /// Fully skew trilinear extension.
    pub fn bracket2(&self, x: &Vector, y: &Vector, z: &Vector) -> Vector {
        let mut out = Vector::zero(self.dim);
        for (&[a, b, c], value) in &self.bracket2 {
            let mut coeff = x.get(a) * &minor2(y, z, b, c);
            coeff -= x.get(b) * &minor2(y, z, a, c);
            coeff += x.get(c) * &minor2(y, z, a, b);
            if !num_traits::Zero::is_zero(&coeff) {
                out.add_scaled(&coeff, value);
            }
        }
        out
    }

    /// Cyclic sum of curly over the three arguments.
    pub fn curly_cyclic(&self, x: &Vector, y: &Vector, z: &Vector) -> Vector {
        let mut out = self.curly(x, y, z);
        out.add_assign(&self.curly(y, z, x));
        out.add_assign(&self.curly(z, x, y));
        out
    }

    /// `[x,y,z]_* = curly cyclic sum + fully skew product`.
    pub fn star(&self, x: &Vector, y: &Vector, z: &Vector) -> Vector {
        let mut out = self.curly_cyclic(x, y, z);
        out.add_assign(&self.bracket2(x, y, z));
        out
    }
}

/// The three five-argument compatibility identities, evaluated on every raw
/// basis 5-tuple; the two storage symmetries hold by construction. The mixed
/// symmetries of these identities make index reductions delicate, so none
/// are attempted.
pub fn check_3ns(a: &ThreeNSLieAlgebra) -> Report {
    let d = a.dim();
    let units: Vec<Vector> = (0..d).map(|i| Vector::unit(d, i)).collect();
    let mut checker = Checker::new("3ns");
    let mut tuple = [0usize; 5];
    loop {
        let [i1, i2, i3, i4, i5] = tuple;
        let (x1, x2, x3, x4, x5) = (&units[i1], &units[i2], &units[i3], &units[i4], &units[i5]);

        // {x1,x2,{x3,x4,x5}} = {{x1,x2,x3}^C,x4,x5} + {[[x1,x2,x3]],x4,x5}
        //   + {x3,{x1,x2,x4}^C,x5} + {x3,[[x1,x2,x4]],x5} + {x3,x4,{x1,x2,x5}}.
        let mut res = a.curly(x1, x2, &a.curly(x3, x4, x5));
        res = res.sub(&a.curly(&a.curly_cyclic(x1, x2, x3), x4, x5));
        res = res.sub(&a.curly(&a.bracket2(x1, x2, x3), x4, x5));
        res = res.sub(&a.curly(x3, &a.curly_cyclic(x1, x2, x4), x5));
        res = res.sub(&a.curly(x3, &a.bracket2(x1, x2, x4), x5));
        res = res.sub(&a.curly(x3, x4, &a.curly(x1, x2, x5)));
        checker.residual("3ns-curly-derivation", &tuple, &res);

        // {{x1,x2,x3}^C,x4,x5} + {[[x1,x2,x3]],x4,x5}
        //   = {x1,x2,{x3,x4,x5}} + {x2,x3,{x1,x4,x5}} + {x3,x1,{x2,x4,x5}}.
        let mut res = a.curly(&a.curly_cyclic(x1, x2, x3), x4, x5);
        res.add_assign(&a.curly(&a.bracket2(x1, x2, x3), x4, x5));
        res = res.sub(&a.curly(x1, x2, &a.curly(x3, x4, x5)));
        res = res.sub(&a.curly(x2, x3, &a.curly(x1, x4, x5)));
        res = res.sub(&a.curly(x3, x1, &a.curly(x2, x4, x5)));
        checker.residual("3ns-star-action", &tuple, &res);

        // [[x1,x2,[x3,x4,x5]_*]] + {x1,x2,[[x3,x4,x5]]}
        //   = [[[x1,x2,x3]_*,x4,x5]] + [[x3,[x1,x2,x4]_*,x5]] + [[x3,x4,[x1,x2,x5]_*]]
        //   + {x4,x5,[[x1,x2,x3]]} + {x5,x3,[[x1,x2,x4]]} + {x3,x4,[[x1,x2,x5]]}.
        let mut res = a.bracket2(x1, x2, &a.star(x3, x4, x5));
        res.add_assign(&a.curly(x1, x2, &a.bracket2(x3, x4, x5)));
        res = res.sub(&a.bracket2(&a.star(x1, x2, x3), x4, x5));
        res = res.sub(&a.bracket2(x3, &a.star(x1, x2, x4), x5));
        res = res.sub(&a.bracket2(x3, x4, &a.star(x1, x2, x5)));
        res = res.sub(&a.curly(x4, x5, &a.bracket2(x1, x2, x3)));
        res = res.sub(&a.curly(x5, x3, &a.bracket2(x1, x2, x4)));
        res = res.sub(&a.curly(x3, x4, &a.bracket2(x1, x2, x5)));
        checker.residual("3ns-bracket-compat", &tuple, &res);

        // Odometer over raw 5-tuples.
        let mut pos = 5;
        loop {
            if pos == 0 {
                return checker.finish();
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < d {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// The subadjacent 3-Lie algebra: structure constants of the star bracket.
/// Requires the compatibility identities; the output passes the fundamental
/// identity and that is checked.
pub fn subadjacent(a: &ThreeNSLieAlgebra) -> Result<ThreeLieAlgebra> {
    if !check_3ns(a).passed() {
        return Err(Error::ValidationFailure("compatibility identities fail; no subadjacent algebra".into()));
    }
    let d = a.dim();
    let units: Vec<Vector> = (0..d).map(|i| Vector::unit(d, i)).collect();
    let alg = ThreeLieAlgebra::new(
        d,
        triples(d)
            .into_iter()
            .map(|[i, j, k]| ([i, j, k], a.star(&units[i], &units[j], &units[k]))),
    )?;
    if !check_filippov(&alg).passed() {
        return Err(Error::ValidationFailure("star bracket fails the fundamental identity".into()));
    }
    Ok(alg)
}

/// NS structure of a Nijenhuis operator: `{x,y,z} = [Nx,Ny,z]` and
/// `[[x,y,z]] = -N([Nx,y,z] + [x,Ny,z] + [x,y,Nz] - N[x,y,z])`.
pub fn from_nijenhuis_ns(g: &ThreeLieAlgebra, n: &LinearMap) -> Result<ThreeNSLieAlgebra> {
    if !nijenhuis_check(g, n).passed() {
        return Err(Error::NotNijenhuis("operator fails the Nijenhuis condition".into()));
    }
    let d = g.dim();
    let units: Vec<Vector> = (0..d).map(|i| Vector::unit(d, i)).collect();
    let ne: Vec<Vector> = (0..d).map(|i| n.apply_basis(i)).collect();

    let mut curly = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            for k in 0..d {
                curly.push(([i, j, k], g.bracket(&ne[i], &ne[j], &units[k])));
            }
        }
    }
    let bracket2 = triples(d).into_iter().map(|[i, j, k]| {
        let mut inner = g.bracket(&ne[i], &units[j], &units[k]);
        inner.add_assign(&g.bracket(&units[i], &ne[j], &units[k]));
        inner.add_assign(&g.bracket(&units[i], &units[j], &ne[k]));
        inner = inner.sub(&n.apply(&g.bracket(&units[i], &units[j], &units[k])));
        ([i, j, k], n.apply(&inner).neg())
    });
    let a = ThreeNSLieAlgebra::new(d, curly, bracket2)?;
    if !check_3ns(&a).passed() {
        return Err(Error::ValidationFailure("Nijenhuis products fail the compatibility identities".into()));
    }
    Ok(a)
}

/// Left multiplication as a representation of the subadjacent algebra, the
/// fully skew product as its cocycle, and the identity map as a twisted
/// operator. All three are validated.
pub struct LeftMultPackage {
    pub subadjacent: ThreeLieAlgebra,
    pub rep: Representation3,
    pub cocycle: TwoCocycle3,
    pub op: TwistedOperator,
}

pub fn left_mult_package(a: &ThreeNSLieAlgebra) -> Result<LeftMultPackage> {
    let sub = subadjacent(a)?;
    let d = a.dim();
    let rep = Representation3::from_fn(d, d, |i, j| {
        Mat::from_cols(&(0..d).map(|k| a.curly_basis(i, j, k)).collect::<Vec<_>>())
    })?;
    let cocycle = TwoCocycle3::from_fn(d, d, |i, j, k| a.bracket2_basis(i, j, k))?;
    if !check_rep3(&sub, &rep).passed() {
        return Err(Error::ValidationFailure(
            "left multiplication is not a representation of the subadjacent algebra".into(),
        ));
    }
    if !check_cocycle3(&sub, &rep, &cocycle).passed() {
        return Err(Error::ValidationFailure("fully skew product is not a cocycle".into()));
    }
    let op = TwistedOperator::new(
        TwistedContext::new(sub.clone(), rep.clone(), cocycle.clone())?,
        LinearMap::identity(d),
    )?;
    if !check_twisted(&op).passed() {
        return Err(Error::ValidationFailure("identity map fails the twisted identity".into()));
    }
    Ok(LeftMultPackage { subadjacent: sub, rep, cocycle, op })
}

/// NS structure on V carried by a twisted operator:
/// `{u,v,w} = rho(Tu,Tv)w`, `[[u,v,w]] = theta(Tu,Tv,Tw)`. The subadjacent
/// algebra coincides with the induced bracket of the operator; checked.
pub fn from_twisted_ns(op: &TwistedOperator) -> Result<ThreeNSLieAlgebra> {
    if !check_twisted(op).passed() {
        return Err(Error::ValidationFailure("operator fails the twisted identity".into()));
    }
    let ctx = op.context();
    let vd = op.v_dim();
    let units: Vec<Vector> = (0..vd).map(|i| Vector::unit(vd, i)).collect();
    let tu: Vec<Vector> = (0..vd).map(|i| op.map().apply_basis(i)).collect();

    let mut curly = Vec::new();
    for i in 0..vd {
        for j in (i + 1)..vd {
            for k in 0..vd {
                curly.push(([i, j, k], ctx.rho.apply(&tu[i], &tu[j], &units[k])));
            }
        }
    }
    let bracket2 = triples(vd)
        .into_iter()
        .map(|[i, j, k]| ([i, j, k], ctx.theta.eval(&tu[i], &tu[j], &tu[k])));
    let a = ThreeNSLieAlgebra::new(vd, curly, bracket2)?;
    if !check_3ns(&a).passed() {
        return Err(Error::ValidationFailure("operator products fail the compatibility identities".into()));
    }
    if subadjacent(&a)? != induced_bracket(op)? {
        return Err(Error::ValidationFailure(
            "subadjacent bracket differs from the induced bracket".into(),
        ));
    }
    Ok(a)
}

/// Compatible NS structure on g from an invertible twisted operator:
/// `{x,y,z} = T(rho(x,y)T^{-1}z)`, `[[x,y,z]] = T(theta(x,y,z))`. The
/// subadjacent bracket recovers the bracket of g exactly; checked.
pub fn compatible_from_invertible(op: &TwistedOperator) -> Result<ThreeNSLieAlgebra> {
    if !check_twisted(op).passed() {
        return Err(Error::ValidationFailure("operator fails the twisted identity".into()));
    }
    let t_inv = op
        .map()
        .inverse()
        .map_err(|_| Error::NotInvertible("operator is singular".into()))?;
    let ctx = op.context();
    let gd = op.g_dim();
    let units: Vec<Vector> = (0..gd).map(|i| Vector::unit(gd, i)).collect();

    let mut curly = Vec::new();
    for i in 0..gd {
        for j in (i + 1)..gd {
            for k in 0..gd {
                let value = op
                    .map()
                    .apply(&ctx.rho.apply(&units[i], &units[j], &t_inv.apply_basis(k)));
                curly.push(([i, j, k], value));
            }
        }
    }
    let bracket2 = triples(gd).into_iter().map(|[i, j, k]| {
        ([i, j, k], op.map().apply(&ctx.theta.eval_basis(i, j, k)))
    });
    let a = ThreeNSLieAlgebra::new(gd, curly, bracket2)?;
    if !check_3ns(&a).passed() {
        return Err(Error::ValidationFailure("compatible products fail the compatibility identities".into()));
    }
    if &subadjacent(&a)? != &ctx.g {
        return Err(Error::ValidationFailure("subadjacent bracket does not recover the algebra".into()));
    }
    Ok(a)
}

/// Binary analogue: `curly` has no symmetry at all (stored densely on all
/// ordered pairs), `bracket2` is skew.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NSLieAlgebra {
    dim: usize,
    curly: BTreeMap<[usize; 2], Vector>,
    bracket2: BTreeMap<[usize; 2], Vector>,
}

impl NSLieAlgebra {
    pub fn new(
        dim: usize,
        curly: impl IntoIterator<Item = ([usize; 2], Vector)>,
        bracket2: impl IntoIterator<Item = ([usize; 2], Vector)>,
    ) -> Result<Self> {
        let mut c = BTreeMap::new();
        for (key, value) in curly {
            let [i, j] = key;
            if !(i < dim && j < dim) {
                return Err(Error::ShapeMismatch(format!("curly key {key:?} out of range")));
            }
            if value.len() != dim {
                return Err(Error::ShapeMismatch("curly value has wrong length".into()));
            }
            if !value.is_zero() && c.insert(key, value).is_some() {
                return Err(Error::ShapeMismatch(format!("duplicate curly key {key:?}")));
            }
        }
        let mut b = BTreeMap::new();
        for (key, value) in bracket2 {
            let [i, j] = key;
            if !(i < j && j < dim) {
                return Err(Error::ShapeMismatch(format!(
                    "bracket key {key:?} is not strictly increasing below {dim}"
                )));
            }
            if value.len() != dim {
                return Err(Error::ShapeMismatch("bracket value has wrong length".into()));
            }
            if !value.is_zero() && b.insert(key, value).is_some() {
                return Err(Error::ShapeMismatch(format!("duplicate bracket key {key:?}")));
            }
        }
        Ok(NSLieAlgebra { dim, curly: c, bracket2: b })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn curly_table(&self) -> &BTreeMap<[usize; 2], Vector> {
        &self.curly
    }

    pub fn bracket2_table(&self) -> &BTreeMap<[usize; 2], Vector> {
        &self.bracket2
    }

    pub fn curly_basis(&self, i: usize, j: usize) -> Vector {
        self.curly
            .get(&[i, j])
            .cloned()
            .unwrap_or_else(|| Vector::zero(self.dim))
    }

    pub fn curly(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero(self.dim);
        for (&[a, b], value) in &self.curly {
            let coeff = x.get(a) * y.get(b);
            if !num_traits::Zero::is_zero(&coeff) {
                out.add_scaled(&coeff, value);
            }
        }
        out
    }

    pub fn bracket2_basis(&self, i: usize, j: usize) -> Vector {
        match sort2(i, j) {
            None => Vector::zero(self.dim),
            Some((key, sign)) => match self.bracket2.get(&key) {
                None => Vector::zero(self.dim),
                Some(v) => {
                    if sign == 1 {
                        v.clone()
                    } else {
                        v.neg()
                    }
                }
            },
        }
    }

    pub fn bracket2(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero(self.dim);
        for (&[a, b], value) in &self.bracket2 {
            let coeff = minor2(x, y, a, b);
            if !num_traits::Zero::is_zero(&coeff) {
                out.add_scaled(&coeff, value);
            }
        }
        out
    }

    /// `[x,y]_* = {x,y} - {y,x} + [[x,y]]`.
    pub fn star(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = self.curly(x, y);
        out = out.sub(&self.curly(y, x));
        out.add_assign(&self.bracket2(x, y));
        out
    }

    /// The star bracket as a Lie algebra table (unvalidated; `check_ns_binary`
    /// validates Jacobi).
    pub fn star_lie(&self) -> Result<LieAlgebra> {
        let d = self.dim;
        let units: Vec<Vector> = (0..d).map(|i| Vector::unit(d, i)).collect();
        LieAlgebra::new(
            d,
            (0..d).flat_map(|i| {
                let units = &units;
                ((i + 1)..d).map(move |j| ([i, j], self.star(&units[i], &units[j])))
            }),
        )
    }
}

/// Both binary compatibility identities on raw basis triples, plus the
/// Jacobi identity for the star bracket.
pub fn check_ns_binary(a: &NSLieAlgebra) -> Report {
    let d = a.dim();
    let units: Vec<Vector> = (0..d).map(|i| Vector::unit(d, i)).collect();
    let mut checker = Checker::new("ns");
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let (x, y, z) = (&units[i], &units[j], &units[k]);

                // {{x,y},z} - {x,{y,z}} - {{y,x},z} + {y,{x,z}} + {[[x,y]],z} = 0
                let mut res = a.curly(&a.curly(x, y), z);
                res = res.sub(&a.curly(x, &a.curly(y, z)));
                res = res.sub(&a.curly(&a.curly(y, x), z));
                res.add_assign(&a.curly(y, &a.curly(x, z)));
                res.add_assign(&a.curly(&a.bracket2(x, y), z));
                checker.residual("ns-curly", &[i, j, k], &res);

                // [[x,[y,z]_*]] + [[y,[z,x]_*]] + [[z,[x,y]_*]]
                //   + {x,[[y,z]]} + {y,[[z,x]]} + {z,[[x,y]]} = 0
                let mut res = a.bracket2(x, &a.star(y, z));
                res.add_assign(&a.bracket2(y, &a.star(z, x)));
                res.add_assign(&a.bracket2(z, &a.star(x, y)));
                res.add_assign(&a.curly(x, &a.bracket2(y, z)));
                res.add_assign(&a.curly(y, &a.bracket2(z, x)));
                res.add_assign(&a.curly(z, &a.bracket2(x, y)));
                checker.residual("ns-bracket", &[i, j, k], &res);
            }
        }
    }
    match a.star_lie() {
        Ok(star) => {
            let jacobi = check_jacobi(&star);
            for v in jacobi.details {
                checker.residual(
                    "ns-star-jacobi",
                    &v.indices,
                    &Vector::new(
                        v.residual
                            .iter()
                            .map(|s| crate::exactla::parse_rational(s).unwrap())
                            .collect(),
                    ),
                );
            }
        }
        Err(_) => return Report::error("ns", "star bracket has inconsistent shape"),
    }
    checker.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat_int;
    use crate::testfix::*;
    use crate::twistop::nijenhuis_package;

    #[test]
    fn trivial_curly_is_a_3lie_algebra() {
        // curly = 0 with the a3 constants in the fully skew slot.
        let a = ThreeNSLieAlgebra::new(3, vec![], vec![([0, 1, 2], e(3, 1))]).unwrap();
        assert!(check_3ns(&a).passed());
        let sub = subadjacent(&a).unwrap();
        assert_eq!(sub, a3());

        let zero = ThreeNSLieAlgebra::new(3, vec![], vec![]).unwrap();
        assert!(check_3ns(&zero).passed());
    }

    #[test]
    fn nijenhuis_products_match_worked_example() {
        let g = a3();
        let a = from_nijenhuis_ns(&g, &n_dcf(2, 3, 5)).unwrap();
        // {e1,e2,e3} = dc e2 and [[e1,e2,e3]] = -(dc + c^2) e2.
        assert_eq!(a.curly_basis(0, 1, 2), e(3, 1).scale(&rat_int(6)));
        assert_eq!(a.bracket2_basis(0, 1, 2), e(3, 1).scale(&rat_int(-15)));
        assert!(check_3ns(&a).passed());

        // N = 0 kills both products.
        let z = from_nijenhuis_ns(&g, &LinearMap::zero(3, 3)).unwrap();
        assert!(z.curly_table().is_empty());
        assert!(z.bracket2_table().is_empty());
    }

    #[test]
    fn subadjacent_of_worked_example_matches_oracle() {
        // Oracle expansion of the cyclic sum from the stored tables:
        // {e1,e2,e3} = dc e2, {e2,e3,e1} = c^2 e2, {e3,e1,e2} = cd e2, so the
        // star bracket is (2dc + c^2 - dc - c^2) e2 = dc e2 = 6 e2 at
        // (2,3,5) - exactly the deformed bracket of the package.
        let a = from_nijenhuis_ns(&a3(), &n_dcf(2, 3, 5)).unwrap();
        assert_eq!(a.curly_basis(1, 2, 0), e(3, 1).scale(&rat_int(9)));
        assert_eq!(a.curly_basis(2, 0, 1), e(3, 1).scale(&rat_int(6)));
        let mut expected = a.curly_basis(0, 1, 2);
        expected.add_assign(&a.curly_basis(1, 2, 0));
        expected.add_assign(&a.curly_basis(2, 0, 1));
        expected.add_assign(&a.bracket2_basis(0, 1, 2));
        assert_eq!(expected, e(3, 1).scale(&rat_int(6)));

        let sub = subadjacent(&a).unwrap();
        assert_eq!(sub.bracket_basis(0, 1, 2), e(3, 1).scale(&rat_int(6)));
        assert_eq!(sub, nijenhuis_package(&a3(), &n_dcf(2, 3, 5)).unwrap().deformed);
    }

    #[test]
    fn left_mult_package_examples() {
        // curly = 0: left multiplication is zero and the identity is twisted
        // because the star bracket equals the fully skew product.
        let a = ThreeNSLieAlgebra::new(3, vec![], vec![([0, 1, 2], e(3, 1))]).unwrap();
        let pkg = left_mult_package(&a).unwrap();
        assert_eq!(pkg.rep, Representation3::zero(3, 3));
        assert_eq!(pkg.cocycle.eval_basis(0, 1, 2), e(3, 1));

        // Worked example instance: all validations run inside.
        let a = from_nijenhuis_ns(&a3(), &n_dcf(2, 3, 5)).unwrap();
        let pkg = left_mult_package(&a).unwrap();
        assert_eq!(pkg.subadjacent.bracket_basis(0, 1, 2), e(3, 1).scale(&rat_int(6)));
    }

    #[test]
    fn from_twisted_matches_nijenhuis_route() {
        let g = a3();
        let n = n_dcf(2, 3, 5);
        let pkg = nijenhuis_package(&g, &n).unwrap();
        let via_op = from_twisted_ns(&pkg.op).unwrap();
        let via_n = from_nijenhuis_ns(&g, &n).unwrap();
        assert_eq!(via_op, via_n);

        // T = 0 gives the zero products.
        let z = from_twisted_ns(&zero_op_adjoint()).unwrap();
        assert!(z.curly_table().is_empty());
        assert!(z.bracket2_table().is_empty());
    }

    #[test]
    fn compatible_structure_examples() {
        // Identity on the Nijenhuis package: subadjacent is the deformed
        // bracket (checked inside compatible_from_invertible).
        let pkg = nijenhuis_package(&a3(), &n_dcf(2, 3, 5)).unwrap();
        let a = compatible_from_invertible(&pkg.op).unwrap();
        assert_eq!(subadjacent(&a).unwrap(), pkg.deformed);

        // rho = 0 with theta carrying the bracket: curly vanishes and the
        // subadjacent bracket is the bracket itself.
        let g = a3();
        let rho = Representation3::zero(3, 3);
        let theta = TwoCocycle3::from_fn(3, 3, |i, j, k| g.bracket_basis(i, j, k)).unwrap();
        let op = TwistedOperator::new(
            TwistedContext::new(g.clone(), rho, theta).unwrap(),
            LinearMap::identity(3),
        )
        .unwrap();
        let a = compatible_from_invertible(&op).unwrap();
        assert!(a.curly_table().is_empty());
        assert_eq!(subadjacent(&a).unwrap(), g);

        // Singular operators are rejected.
        let s = TwistedOperator::new(
            TwistedContext::new(
                ThreeLieAlgebra::abelian(3),
                Representation3::zero(3, 3),
                TwoCocycle3::zero(3, 3),
            )
            .unwrap(),
            LinearMap::zero(3, 3),
        )
        .unwrap();
        assert!(matches!(compatible_from_invertible(&s), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn binary_ns_examples() {
        // Both products zero.
        let z = NSLieAlgebra::new(3, vec![], vec![]).unwrap();
        assert!(check_ns_binary(&z).passed());

        // curly = 0 with a Lie algebra in the skew slot: identities reduce
        // to Jacobi.
        let lie = NSLieAlgebra::new(3, vec![], vec![([0, 1], e(3, 1))]).unwrap();
        assert!(check_ns_binary(&lie).passed());
        assert_eq!(lie.star_lie().unwrap(), l3());

        // Negative control: a curly table violating the first identity.
        let bad = NSLieAlgebra::new(
            2,
            vec![([0, 0], e(2, 1)), ([1, 0], e(2, 0))],
            vec![],
        )
        .unwrap();
        assert!(!check_ns_binary(&bad).passed());
    }
}
