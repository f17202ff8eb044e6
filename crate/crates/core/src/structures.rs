//! Core algebraic objects: Lie and 3-Lie algebras, their representations and
//! 2-cocycles, with axiom checkers and the twisted semidirect product.
//!
//! Structure constants are stored only on strictly increasing basis tuples;
//! every other ordering is recovered by permutation sign at evaluation time,
//! so equality of algebras is a table comparison. Checkers run over basis
//! tuples only — multilinearity and the skew symmetries of each identity make
//! that sufficient — and report the first violating tuple with its residual.
//! Constructors validate shapes but not axioms; validation is explicit so
//! that negative-control tests can build invalid objects.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactla::{Mat, Rational, Vector};
use crate::multiindex::{pairs, sort2, sort3, triples};
use crate::report::{Checker, Report};

fn checked_value(dim: usize, value: Vector, what: &str) -> Result<Vector> {
    if value.len() != dim {
        return Err(Error::ShapeMismatch(format!(
            "{what}: value has length {}, expected {dim}",
            value.len()
        )));
    }
    Ok(value)
}

/// 2x2 alternating coefficient of (x, y) on the pair (a, b).
fn minor2(x: &Vector, y: &Vector, a: usize, b: usize) -> Rational {
    x.get(a) * y.get(b) - x.get(b) * y.get(a)
}

/// 3x3 alternating coefficient of (x, y, z) on the triple (a, b, c).
fn minor3(x: &Vector, y: &Vector, z: &Vector, a: usize, b: usize, c: usize) -> Rational {
    let mut acc = x.get(a) * &minor2(y, z, b, c);
    acc -= x.get(b) * &minor2(y, z, a, c);
    acc += x.get(c) * &minor2(y, z, a, b);
    acc
}

/// Finite-dimensional 3-Lie algebra given by structure constants
/// `[e_i, e_j, e_k]` on strictly increasing triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeLieAlgebra {
    dim: usize,
    c: BTreeMap<[usize; 3], Vector>,
}

impl ThreeLieAlgebra {
    /// Build from sparse entries. Keys must be strictly increasing and in
    /// range; values must have length `dim`. Zero values are dropped so that
    /// equal algebras have equal tables.
    pub fn new(dim: usize, entries: impl IntoIterator<Item = ([usize; 3], Vector)>) -> Result<Self> {
        let mut c = BTreeMap::new();
        for (key, value) in entries {
            let [i, j, k] = key;
            if !(i < j && j < k && k < dim) {
                return Err(Error::ShapeMismatch(format!(
                    "3-Lie bracket key {key:?} is not strictly increasing below {dim}"
                )));
            }
            let value = checked_value(dim, value, "3-Lie bracket")?;
            if !value.is_zero() && c.insert(key, value).is_some() {
                return Err(Error::ShapeMismatch(format!("duplicate bracket key {key:?}")));
            }
        }
        Ok(ThreeLieAlgebra { dim, c })
    }

    pub fn abelian(dim: usize) -> Self {
        ThreeLieAlgebra { dim, c: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Canonical structure-constant table (strictly increasing keys only).
    pub fn table(&self) -> &BTreeMap<[usize; 3], Vector> {
        &self.c
    }

    /// `[e_i, e_j, e_k]`, any index order; repeated indices give zero.
    pub fn bracket_basis(&self, i: usize, j: usize, k: usize) -> Vector {
        match sort3(i, j, k) {
            None => Vector::zero(self.dim),
            Some((key, sign)) => match self.c.get(&key) {
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

    /// Trilinear fully skew evaluation of `[x, y, z]`.
    pub fn bracket(&self, x: &Vector, y: &Vector, z: &Vector) -> Vector {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        assert_eq!(z.len(), self.dim);
        let mut out = Vector::zero(self.dim);
        for (&[a, b, c], value) in &self.c {
            let coeff = minor3(x, y, z, a, b, c);
            if !coeff.is_zero() {
                out.add_scaled(&coeff, value);
            }
        }
        out
    }
}

/// Evaluate `[x1, x2, [x3, x4, x5]] - [[x1, x2, x3], x4, x5]
/// - [x3, [x1, x2, x4], x5] - [x3, x4, [x1, x2, x5]]`.
fn filippov_residual(g: &ThreeLieAlgebra, x: [&Vector; 5]) -> Vector {
    let inner = g.bracket(x[2], x[3], x[4]);
    let mut res = g.bracket(x[0], x[1], &inner);
    res = res.sub(&g.bracket(&g.bracket(x[0], x[1], x[2]), x[3], x[4]));
    res = res.sub(&g.bracket(x[2], &g.bracket(x[0], x[1], x[3]), x[4]));
    res = res.sub(&g.bracket(x[2], x[3], &g.bracket(x[0], x[1], x[4])));
    res
}

/// Fundamental identity on all basis 5-tuples. Pairs i1 < i2 and triples
/// i3 < i4 < i5 suffice: the residual is multilinear, skew in (x1, x2) and
/// skew in (x3, x4, x5).
pub fn check_filippov(g: &ThreeLieAlgebra) -> Report {
    let mut checker = Checker::new("filippov");
    let units: Vec<Vector> = (0..g.dim).map(|i| Vector::unit(g.dim, i)).collect();
    for p in pairs(g.dim) {
        for t in triples(g.dim) {
            let res = filippov_residual(
                g,
                [&units[p[0]], &units[p[1]], &units[t[0]], &units[t[1]], &units[t[2]]],
            );
            checker.residual("filippov", &[p[0], p[1], t[0], t[1], t[2]], &res);
        }
    }
    checker.finish()
}

/// Finite-dimensional Lie algebra given by `[e_i, e_j]` on pairs i < j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    c: BTreeMap<[usize; 2], Vector>,
}

impl LieAlgebra {
    pub fn new(dim: usize, entries: impl IntoIterator<Item = ([usize; 2], Vector)>) -> Result<Self> {
        let mut c = BTreeMap::new();
        for (key, value) in entries {
            let [i, j] = key;
            if !(i < j && j < dim) {
                return Err(Error::ShapeMismatch(format!(
                    "Lie bracket key {key:?} is not strictly increasing below {dim}"
                )));
            }
            let value = checked_value(dim, value, "Lie bracket")?;
            if !value.is_zero() && c.insert(key, value).is_some() {
                return Err(Error::ShapeMismatch(format!("duplicate bracket key {key:?}")));
            }
        }
        Ok(LieAlgebra { dim, c })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra { dim, c: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn table(&self) -> &BTreeMap<[usize; 2], Vector> {
        &self.c
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        match sort2(i, j) {
            None => Vector::zero(self.dim),
            Some((key, sign)) => match self.c.get(&key) {
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

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = Vector::zero(self.dim);
        for (&[a, b], value) in &self.c {
            let coeff = minor2(x, y, a, b);
            if !coeff.is_zero() {
                out.add_scaled(&coeff, value);
            }
        }
        out
    }
}

/// Jacobi identity on all basis triples i < j < k.
pub fn check_jacobi(g: &LieAlgebra) -> Report {
    let mut checker = Checker::new("jacobi");
    let units: Vec<Vector> = (0..g.dim).map(|i| Vector::unit(g.dim, i)).collect();
    for t in triples(g.dim) {
        let (x, y, z) = (&units[t[0]], &units[t[1]], &units[t[2]]);
        let mut res = g.bracket(&g.bracket(x, y), z);
        res.add_assign(&g.bracket(&g.bracket(y, z), x));
        res.add_assign(&g.bracket(&g.bracket(z, x), y));
        checker.residual("jacobi", &t, &res);
    }
    checker.finish()
}

/// Representation of a 3-Lie algebra: operators `rho(e_i, e_j)` on V for
/// pairs i < j of algebra basis indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation3 {
    alg_dim: usize,
    space_dim: usize,
    r: BTreeMap<[usize; 2], Mat>,
}

impl Representation3 {
    pub fn new(
        alg_dim: usize,
        space_dim: usize,
        entries: impl IntoIterator<Item = ([usize; 2], Mat)>,
    ) -> Result<Self> {
        let mut r = BTreeMap::new();
        for (key, m) in entries {
            let [i, j] = key;
            if !(i < j && j < alg_dim) {
                return Err(Error::ShapeMismatch(format!(
                    "representation key {key:?} is not strictly increasing below {alg_dim}"
                )));
            }
            if m.rows() != space_dim || m.cols() != space_dim {
                return Err(Error::ShapeMismatch(format!(
                    "representation operator at {key:?} is {}x{}, expected {space_dim}x{space_dim}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_zero() && r.insert(key, m).is_some() {
                return Err(Error::ShapeMismatch(format!("duplicate representation key {key:?}")));
            }
        }
        Ok(Representation3 { alg_dim, space_dim, r })
    }

    pub fn zero(alg_dim: usize, space_dim: usize) -> Self {
        Representation3 { alg_dim, space_dim, r: BTreeMap::new() }
    }

    pub fn from_fn(alg_dim: usize, space_dim: usize, f: impl Fn(usize, usize) -> Mat) -> Result<Self> {
        Representation3::new(alg_dim, space_dim, pairs(alg_dim).into_iter().map(|[i, j]| ([i, j], f(i, j))))
    }

    /// Adjoint representation: `rho(x, y)z = [x, y, z]`.
    pub fn adjoint(g: &ThreeLieAlgebra) -> Self {
        let dim = g.dim();
        Representation3::from_fn(dim, dim, |i, j| {
            Mat::from_cols(&(0..dim).map(|k| g.bracket_basis(i, j, k)).collect::<Vec<_>>())
        })
        .expect("adjoint shapes are consistent by construction")
    }

    pub fn alg_dim(&self) -> usize {
        self.alg_dim
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    /// Canonical operator table (strictly increasing keys only).
    pub fn table(&self) -> &BTreeMap<[usize; 2], Mat> {
        &self.r
    }

    /// `rho(e_i, e_j)` for any index order; zero when i == j.
    pub fn mat_basis(&self, i: usize, j: usize) -> Mat {
        match sort2(i, j) {
            None => Mat::zero(self.space_dim, self.space_dim),
            Some((key, sign)) => match self.r.get(&key) {
                None => Mat::zero(self.space_dim, self.space_dim),
                Some(m) => {
                    if sign == 1 {
                        m.clone()
                    } else {
                        m.neg()
                    }
                }
            },
        }
    }

    /// Bilinear skew extension `rho(x, y)` for algebra vectors.
    pub fn mat_of(&self, x: &Vector, y: &Vector) -> Mat {
        assert_eq!(x.len(), self.alg_dim);
        assert_eq!(y.len(), self.alg_dim);
        let mut out = Mat::zero(self.space_dim, self.space_dim);
        for (&[a, b], m) in &self.r {
            let coeff = minor2(x, y, a, b);
            if !coeff.is_zero() {
                out = out.add(&m.scale(&coeff));
            }
        }
        out
    }

    pub fn apply(&self, x: &Vector, y: &Vector, v: &Vector) -> Vector {
        self.mat_of(x, y).mul_vec(v)
    }

    pub fn apply_basis(&self, i: usize, j: usize, v: &Vector) -> Vector {
        self.mat_basis(i, j).mul_vec(v)
    }
}

/// Both representation identities on basis tuples, applied to each basis
/// vector of V. The first identity is skew in (x1, x2) and (x3, x4)
/// separately; the second is fully skew in (x1, x2, x3) with x4 free.
pub fn check_rep3(g: &ThreeLieAlgebra, rho: &Representation3) -> Report {
    let mut checker = Checker::new("rep3");
    if rho.alg_dim != g.dim() {
        return Report::error("rep3", "representation algebra dimension mismatch");
    }
    let units: Vec<Vector> = (0..g.dim()).map(|i| Vector::unit(g.dim(), i)).collect();
    let ps = pairs(g.dim());

    for p in &ps {
        for q in &ps {
            let (x1, x2, x3, x4) = (&units[p[0]], &units[p[1]], &units[q[0]], &units[q[1]]);
            let mut m = rho.mat_of(x1, x2).mul(&rho.mat_of(x3, x4));
            m = m.sub(&rho.mat_of(&g.bracket(x1, x2, x3), x4));
            m = m.sub(&rho.mat_of(x3, &g.bracket(x1, x2, x4)));
            m = m.sub(&rho.mat_of(x3, x4).mul(&rho.mat_of(x1, x2)));
            for v in 0..rho.space_dim {
                checker.residual("rep-identity-1", &[p[0], p[1], q[0], q[1], v], &m.col(v));
            }
        }
    }

    for t in triples(g.dim()) {
        for x4 in 0..g.dim() {
            let (a, b, c, d) = (&units[t[0]], &units[t[1]], &units[t[2]], &units[x4]);
            let mut m = rho.mat_of(&g.bracket(a, b, c), d);
            m = m.sub(&rho.mat_of(a, b).mul(&rho.mat_of(c, d)));
            m = m.sub(&rho.mat_of(b, c).mul(&rho.mat_of(a, d)));
            m = m.sub(&rho.mat_of(c, a).mul(&rho.mat_of(b, d)));
            for v in 0..rho.space_dim {
                checker.residual("rep-identity-2", &[t[0], t[1], t[2], x4, v], &m.col(v));
            }
        }
    }
    checker.finish()
}

/// V-valued fully skew trilinear map on a 3-Lie algebra, stored on strictly
/// increasing triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCocycle3 {
    alg_dim: usize,
    space_dim: usize,
    values: BTreeMap<[usize; 3], Vector>,
}

impl TwoCocycle3 {
    pub fn new(
        alg_dim: usize,
        space_dim: usize,
        entries: impl IntoIterator<Item = ([usize; 3], Vector)>,
    ) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (key, value) in entries {
            let [i, j, k] = key;
            if !(i < j && j < k && k < alg_dim) {
                return Err(Error::ShapeMismatch(format!(
                    "cocycle key {key:?} is not strictly increasing below {alg_dim}"
                )));
            }
            let value = checked_value(space_dim, value, "cocycle value")?;
            if !value.is_zero() && values.insert(key, value).is_some() {
                return Err(Error::ShapeMismatch(format!("duplicate cocycle key {key:?}")));
            }
        }
        Ok(TwoCocycle3 { alg_dim, space_dim, values })
    }

    pub fn zero(alg_dim: usize, space_dim: usize) -> Self {
        TwoCocycle3 { alg_dim, space_dim, values: BTreeMap::new() }
    }

    pub fn from_fn(alg_dim: usize, space_dim: usize, f: impl Fn(usize, usize, usize) -> Vector) -> Result<Self> {
        TwoCocycle3::new(
            alg_dim,
            space_dim,
            triples(alg_dim).into_iter().map(|[i, j, k]| ([i, j, k], f(i, j, k))),
        )
    }

    pub fn alg_dim(&self) -> usize {
        self.alg_dim
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn table(&self) -> &BTreeMap<[usize; 3], Vector> {
        &self.values
    }

    pub fn eval_basis(&self, i: usize, j: usize, k: usize) -> Vector {
        match sort3(i, j, k) {
            None => Vector::zero(self.space_dim),
            Some((key, sign)) => match self.values.get(&key) {
                None => Vector::zero(self.space_dim),
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

    pub fn eval(&self, x: &Vector, y: &Vector, z: &Vector) -> Vector {
        assert_eq!(x.len(), self.alg_dim);
        assert_eq!(y.len(), self.alg_dim);
        assert_eq!(z.len(), self.alg_dim);
        let mut out = Vector::zero(self.space_dim);
        for (&[a, b, c], value) in &self.values {
            let coeff = minor3(x, y, z, a, b, c);
            if !coeff.is_zero() {
                out.add_scaled(&coeff, value);
            }
        }
        out
    }

    /// Pointwise sum; shapes must agree.
    pub fn add(&self, other: &TwoCocycle3) -> Result<TwoCocycle3> {
        if self.alg_dim != other.alg_dim || self.space_dim != other.space_dim {
            return Err(Error::ShapeMismatch("cocycle sum shape mismatch".into()));
        }
        TwoCocycle3::from_fn(self.alg_dim, self.space_dim, |i, j, k| {
            self.eval_basis(i, j, k).add(&other.eval_basis(i, j, k))
        })
    }

    pub fn neg(&self) -> TwoCocycle3 {
        TwoCocycle3 {
            alg_dim: self.alg_dim,
            space_dim: self.space_dim,
            values: self.values.iter().map(|(k, v)| (*k, v.neg())).collect(),
        }
    }
}

/// 2-cocycle identity on basis tuples (x1 < x2; y1 < y2 < y3).
pub fn check_cocycle3(g: &ThreeLieAlgebra, rho: &Representation3, theta: &TwoCocycle3) -> Report {
    let mut checker = Checker::new("cocycle3");
    if theta.alg_dim != g.dim() || rho.alg_dim != g.dim() || theta.space_dim != rho.space_dim {
        return Report::error("cocycle3", "cocycle shape mismatch");
    }
    let units: Vec<Vector> = (0..g.dim()).map(|i| Vector::unit(g.dim(), i)).collect();
    for p in pairs(g.dim()) {
        for t in triples(g.dim()) {
            let (x1, x2) = (&units[p[0]], &units[p[1]]);
            let (y1, y2, y3) = (&units[t[0]], &units[t[1]], &units[t[2]]);
            let mut res = theta.eval(x1, x2, &g.bracket(y1, y2, y3));
            res.add_assign(&rho.apply(x1, x2, &theta.eval(y1, y2, y3)));
            res = res.sub(&theta.eval(&g.bracket(x1, x2, y1), y2, y3));
            res = res.sub(&theta.eval(y1, &g.bracket(x1, x2, y2), y3));
            res = res.sub(&theta.eval(y1, y2, &g.bracket(x1, x2, y3)));
            res = res.sub(&rho.apply(y2, y3, &theta.eval(x1, x2, y1)));
            res = res.sub(&rho.apply(y3, y1, &theta.eval(x1, x2, y2)));
            res = res.sub(&rho.apply(y1, y2, &theta.eval(x1, x2, y3)));
            checker.residual("cocycle3", &[p[0], p[1], t[0], t[1], t[2]], &res);
        }
    }
    checker.finish()
}

/// Representation of a Lie algebra: one operator per basis index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationLie {
    alg_dim: usize,
    space_dim: usize,
    r: Vec<Mat>,
}

impl RepresentationLie {
    pub fn new(alg_dim: usize, space_dim: usize, r: Vec<Mat>) -> Result<Self> {
        if r.len() != alg_dim {
            return Err(Error::ShapeMismatch(format!(
                "Lie representation has {} operators, expected {alg_dim}",
                r.len()
            )));
        }
        for (i, m) in r.iter().enumerate() {
            if m.rows() != space_dim || m.cols() != space_dim {
                return Err(Error::ShapeMismatch(format!(
                    "Lie representation operator {i} is {}x{}, expected {space_dim}x{space_dim}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(RepresentationLie { alg_dim, space_dim, r })
    }

    pub fn zero(alg_dim: usize, space_dim: usize) -> Self {
        RepresentationLie {
            alg_dim,
            space_dim,
            r: vec![Mat::zero(space_dim, space_dim); alg_dim],
        }
    }

    /// Adjoint representation: `rho(x)y = [x, y]`.
    pub fn adjoint(g: &LieAlgebra) -> Self {
        let dim = g.dim();
        let r = (0..dim)
            .map(|i| Mat::from_cols(&(0..dim).map(|j| g.bracket_basis(i, j)).collect::<Vec<_>>()))
            .collect();
        RepresentationLie { alg_dim: dim, space_dim: dim, r }
    }

    pub fn alg_dim(&self) -> usize {
        self.alg_dim
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn mat_basis(&self, i: usize) -> &Mat {
        &self.r[i]
    }

    pub fn mats(&self) -> &[Mat] {
        &self.r
    }

    pub fn mat_of(&self, x: &Vector) -> Mat {
        assert_eq!(x.len(), self.alg_dim);
        let mut out = Mat::zero(self.space_dim, self.space_dim);
        for (i, m) in self.r.iter().enumerate() {
            if !x.get(i).is_zero() {
                out = out.add(&m.scale(x.get(i)));
            }
        }
        out
    }

    pub fn apply(&self, x: &Vector, v: &Vector) -> Vector {
        self.mat_of(x).mul_vec(v)
    }
}

/// `rho([x, y]) = rho(x)rho(y) - rho(y)rho(x)` on basis pairs.
pub fn check_rep_lie(g: &LieAlgebra, rho: &RepresentationLie) -> Report {
    let mut checker = Checker::new("rep_lie");
    if rho.alg_dim != g.dim() {
        return Report::error("rep_lie", "representation algebra dimension mismatch");
    }
    for p in pairs(g.dim()) {
        let bracket = g.bracket_basis(p[0], p[1]);
        let mut m = rho.mat_of(&bracket);
        let (a, b) = (rho.mat_basis(p[0]), rho.mat_basis(p[1]));
        m = m.sub(&a.mul(b));
        m = m.add(&b.mul(a));
        for v in 0..rho.space_dim {
            checker.residual("rep-lie", &[p[0], p[1], v], &m.col(v));
        }
    }
    checker.finish()
}

/// V-valued skew bilinear map on a Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCocycleLie {
    alg_dim: usize,
    space_dim: usize,
    values: BTreeMap<[usize; 2], Vector>,
}

impl TwoCocycleLie {
    pub fn new(
        alg_dim: usize,
        space_dim: usize,
        entries: impl IntoIterator<Item = ([usize; 2], Vector)>,
    ) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (key, value) in entries {
            let [i, j] = key;
            if !(i < j && j < alg_dim) {
                return Err(Error::ShapeMismatch(format!(
                    "cocycle key {key:?} is not strictly increasing below {alg_dim}"
                )));
            }
            let value = checked_value(space_dim, value, "cocycle value")?;
            if !value.is_zero() && values.insert(key, value).is_some() {
                return Err(Error::ShapeMismatch(format!("duplicate cocycle key {key:?}")));
            }
        }
        Ok(TwoCocycleLie { alg_dim, space_dim, values })
    }

    pub fn zero(alg_dim: usize, space_dim: usize) -> Self {
        TwoCocycleLie { alg_dim, space_dim, values: BTreeMap::new() }
    }

    pub fn alg_dim(&self) -> usize {
        self.alg_dim
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn table(&self) -> &BTreeMap<[usize; 2], Vector> {
        &self.values
    }

    pub fn eval_basis(&self, i: usize, j: usize) -> Vector {
        match sort2(i, j) {
            None => Vector::zero(self.space_dim),
            Some((key, sign)) => match self.values.get(&key) {
                None => Vector::zero(self.space_dim),
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

    pub fn eval(&self, x: &Vector, y: &Vector) -> Vector {
        assert_eq!(x.len(), self.alg_dim);
        assert_eq!(y.len(), self.alg_dim);
        let mut out = Vector::zero(self.space_dim);
        for (&[a, b], value) in &self.values {
            let coeff = minor2(x, y, a, b);
            if !coeff.is_zero() {
                out.add_scaled(&coeff, value);
            }
        }
        out
    }
}

/// Binary cyclic cocycle identity on basis triples i < j < k.
pub fn check_cocycle_lie(g: &LieAlgebra, rho: &RepresentationLie, theta: &TwoCocycleLie) -> Report {
    let mut checker = Checker::new("cocycle_lie");
    if theta.alg_dim != g.dim() || rho.alg_dim != g.dim() || theta.space_dim != rho.space_dim {
        return Report::error("cocycle_lie", "cocycle shape mismatch");
    }
    let units: Vec<Vector> = (0..g.dim()).map(|i| Vector::unit(g.dim(), i)).collect();
    for t in triples(g.dim()) {
        let (x, y, z) = (&units[t[0]], &units[t[1]], &units[t[2]]);
        let mut res = rho.apply(x, &theta.eval(y, z));
        res.add_assign(&rho.apply(y, &theta.eval(z, x)));
        res.add_assign(&rho.apply(z, &theta.eval(x, y)));
        res.add_assign(&theta.eval(x, &g.bracket(y, z)));
        res.add_assign(&theta.eval(y, &g.bracket(z, x)));
        res.add_assign(&theta.eval(z, &g.bracket(x, y)));
        checker.residual("cocycle-lie", &t, &res);
    }
    checker.finish()
}

/// Linear map between coordinate spaces, as a target_dim x source_dim matrix
/// acting on column vectors. Houses operators T, one-cochains, Nijenhuis
/// operators and morphism components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    matrix: Mat,
}

impl LinearMap {
    pub fn new(matrix: Mat) -> Self {
        LinearMap { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        LinearMap { matrix: Mat::identity(dim) }
    }

    pub fn zero(target_dim: usize, source_dim: usize) -> Self {
        LinearMap { matrix: Mat::zero(target_dim, source_dim) }
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        self.matrix.mul_vec(v)
    }

    pub fn apply_basis(&self, i: usize) -> Vector {
        self.matrix.col(i)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap { matrix: self.matrix.mul(&other.matrix) }
    }

    pub fn add(&self, other: &LinearMap) -> LinearMap {
        LinearMap { matrix: self.matrix.add(&other.matrix) }
    }

    pub fn sub(&self, other: &LinearMap) -> LinearMap {
        LinearMap { matrix: self.matrix.sub(&other.matrix) }
    }

    pub fn neg(&self) -> LinearMap {
        LinearMap { matrix: self.matrix.neg() }
    }

    pub fn scale(&self, c: &Rational) -> LinearMap {
        LinearMap { matrix: self.matrix.scale(c) }
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        Ok(LinearMap { matrix: self.matrix.inverse()? })
    }
}

/// Coboundary of a 1-cochain `theta: g -> V`:
/// `(d theta)(x, y, z) = rho(x, y)theta(z) + rho(y, z)theta(x)
/// + rho(z, x)theta(y) - theta([x, y, z])`.
pub fn one_cochain_coboundary(
    g: &ThreeLieAlgebra,
    rho: &Representation3,
    theta: &LinearMap,
) -> Result<TwoCocycle3> {
    if theta.source_dim() != g.dim() || theta.target_dim() != rho.space_dim() {
        return Err(Error::ShapeMismatch("1-cochain shape mismatch".into()));
    }
    let units: Vec<Vector> = (0..g.dim()).map(|i| Vector::unit(g.dim(), i)).collect();
    TwoCocycle3::from_fn(g.dim(), rho.space_dim(), |i, j, k| {
        let (x, y, z) = (&units[i], &units[j], &units[k]);
        let mut out = rho.apply(x, y, &theta.apply_basis(k));
        out.add_assign(&rho.apply(y, z, &theta.apply_basis(i)));
        out.add_assign(&rho.apply(z, x, &theta.apply_basis(j)));
        out = out.sub(&theta.apply(&g.bracket(x, y, z)));
        out
    })
}

/// Twisted semidirect product on g + V:
/// `[(x,u),(y,v),(z,w)] = ([x,y,z], rho(x,y)w + rho(z,x)v + rho(y,z)u + theta(x,y,z))`.
///
/// Inputs must pass their checkers; the g-block of the result carries the
/// bracket of g, the mixed blocks carry rho, the pure-g block carries theta
/// into the V part, and brackets with two or more V arguments vanish.
pub fn semidirect_twisted(
    g: &ThreeLieAlgebra,
    rho: &Representation3,
    theta: &TwoCocycle3,
) -> Result<ThreeLieAlgebra> {
    for (name, report) in [
        ("algebra", check_filippov(g)),
        ("representation", check_rep3(g, rho)),
        ("cocycle", check_cocycle3(g, rho, theta)),
    ] {
        if !report.passed() {
            return Err(Error::ValidationFailure(format!(
                "semidirect product input {name} failed its checker"
            )));
        }
    }
    let n = g.dim();
    let m = rho.space_dim();
    let total = n + m;
    let mut entries = Vec::new();
    for [a, b, c] in triples(total) {
        let mut value = Vector::zero(total);
        if c < n {
            let bracket = g.bracket_basis(a, b, c);
            let tw = theta.eval_basis(a, b, c);
            for i in 0..n {
                value.set(i, bracket.get(i).clone());
            }
            for i in 0..m {
                value.set(n + i, tw.get(i).clone());
            }
        } else if b < n {
            let rv = rho.apply_basis(a, b, &Vector::unit(m, c - n));
            for i in 0..m {
                value.set(n + i, rv.get(i).clone());
            }
        }
        if !value.is_zero() {
            entries.push(([a, b, c], value));
        }
    }
    ThreeLieAlgebra::new(total, entries)
}

/// Does `phi` intertwine the brackets of `src` and `dst`? Checked on all
/// basis triples of `src`.
pub fn check_algebra_morphism(src: &ThreeLieAlgebra, dst: &ThreeLieAlgebra, phi: &LinearMap) -> Report {
    let mut checker = Checker::new("3lie-morphism");
    if phi.source_dim() != src.dim() || phi.target_dim() != dst.dim() {
        return Report::error("3lie-morphism", "morphism shape mismatch");
    }
    for t in triples(src.dim()) {
        let lhs = phi.apply(&src.bracket_basis(t[0], t[1], t[2]));
        let rhs = dst.bracket(
            &phi.apply_basis(t[0]),
            &phi.apply_basis(t[1]),
            &phi.apply_basis(t[2]),
        );
        checker.residual("3lie-morphism", &t, &lhs.sub(&rhs));
    }
    checker.finish()
}

/// Shift map `(x, u) -> (x, u - theta1(x))` on g + V, as a linear map.
pub fn semidirect_shift_map(g_dim: usize, theta1: &LinearMap) -> LinearMap {
    let m = theta1.target_dim();
    let total = g_dim + m;
    LinearMap::new(Mat::from_fn(total, total, |r, c| {
        if r == c {
            Rational::from_integer(1.into())
        } else if r >= g_dim && c < g_dim {
            -theta1.matrix().get(r - g_dim, c)
        } else {
            Rational::zero()
        }
    }))
}

/// The shift map by `theta1` intertwines the twisted semidirect products for
/// `theta` and `theta + d theta1`.
pub fn check_semidirect_iso(
    g: &ThreeLieAlgebra,
    rho: &Representation3,
    theta: &TwoCocycle3,
    theta1: &LinearMap,
) -> Result<Report> {
    let shifted = theta.add(&one_cochain_coboundary(g, rho, theta1)?)?;
    let a = semidirect_twisted(g, rho, theta)?;
    let b = semidirect_twisted(g, rho, &shifted)?;
    let psi = semidirect_shift_map(g.dim(), theta1);
    Ok(check_algebra_morphism(&a, &b, &psi))
}
