//! Cochain complexes of 3-Lie algebras and the twisted complex of a twisted
//! operator, with exact cohomology dimensions.
//!
//! An n-cochain (n >= 1) takes 2n-1 arguments: n-1 pairs followed by a single
//! slot. Evaluation is skew within each pair slot; for n >= 2 the final pair
//! and the single argument are jointly skew, so coefficients are stored on
//! strictly increasing triples there. (The n = 2 case is an honest trilinear
//! alternating map; we extend that last-three-arguments symmetry to all
//! higher degrees.)
//!
//! The twisted differential is computed two ways and cross-checked on every
//! call: the generic differential of the induced algebra on V with
//! coefficients in the twisted representation on g is authoritative, and the
//! expanded operator formula is an independent transcription guard.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactla::{self, Mat, Rational, Vector};
use crate::multiindex::{pair_count, pair_index, pairs, sort2, sort3, triple_count, triple_index, triples};
use crate::structures::{LinearMap, Representation3, ThreeLieAlgebra, TwoCocycle3};
use crate::twistop::{check_twisted, TwistedOperator};

/// Shape of a cochain space: maps from tuples over an algebra of dimension
/// `alg_dim` into a module of dimension `mod_dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CochainSpace {
    pub degree: usize,
    pub alg_dim: usize,
    pub mod_dim: usize,
}

/// Canonical index of one stored coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CochainKey {
    /// Degree 1: a single basis index.
    Single(usize),
    /// Degree n >= 2: n-2 strictly increasing pairs plus the terminal
    /// strictly increasing triple.
    Higher {
        pairs: Vec<[usize; 2]>,
        triple: [usize; 3],
    },
}

impl CochainKey {
    /// Flatten to the argument list (length 2n-1) the cochain is applied to.
    pub fn args(&self) -> Vec<usize> {
        match self {
            CochainKey::Single(i) => vec![*i],
            CochainKey::Higher { pairs, triple } => {
                let mut out = Vec::with_capacity(2 * pairs.len() + 3);
                for p in pairs {
                    out.extend_from_slice(p);
                }
                out.extend_from_slice(triple);
                out
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            CochainKey::Single(i) => format!("e{i}"),
            CochainKey::Higher { pairs, triple } => {
                let mut s = String::new();
                for p in pairs {
                    s.push_str(&format!("({},{})", p[0], p[1]));
                }
                s.push_str(&format!("({},{},{})", triple[0], triple[1], triple[2]));
                s
            }
        }
    }
}

impl CochainSpace {
    pub fn new(degree: usize, alg_dim: usize, mod_dim: usize) -> Self {
        assert!(degree >= 1, "cochain degree must be at least 1");
        CochainSpace { degree, alg_dim, mod_dim }
    }

    /// Number of stored index tuples.
    pub fn index_count(&self) -> usize {
        if self.degree == 1 {
            self.alg_dim
        } else {
            pair_count(self.alg_dim).pow((self.degree - 2) as u32) * triple_count(self.alg_dim)
        }
    }

    /// Total coefficient dimension of the space.
    pub fn coeff_dim(&self) -> usize {
        self.index_count() * self.mod_dim
    }

    /// Canonical enumeration of keys; [`key_position`] is its inverse.
    pub fn keys(&self) -> Vec<CochainKey> {
        if self.degree == 1 {
            return (0..self.alg_dim).map(CochainKey::Single).collect();
        }
        let ps = pairs(self.alg_dim);
        let ts = triples(self.alg_dim);
        let slots = self.degree - 2;
        let mut out = Vec::with_capacity(self.index_count());
        let mut stack = vec![0usize; slots];
        loop {
            for t in &ts {
                out.push(CochainKey::Higher {
                    pairs: stack.iter().map(|&s| ps[s]).collect(),
                    triple: *t,
                });
            }
            // Odometer over the pair slots, last slot fastest.
            let mut i = slots;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                stack[i] += 1;
                if stack[i] < ps.len() {
                    break;
                }
                stack[i] = 0;
            }
            if slots == 0 {
                return out;
            }
        }
    }

    pub fn key_position(&self, key: &CochainKey) -> usize {
        match key {
            CochainKey::Single(i) => *i,
            CochainKey::Higher { pairs: kp, triple } => {
                let np = pair_count(self.alg_dim);
                let mut pos = 0usize;
                for p in kp {
                    pos = pos * np + pair_index(self.alg_dim, *p);
                }
                pos * triple_count(self.alg_dim) + triple_index(self.alg_dim, *triple)
            }
        }
    }
}

/// One argument of a mixed evaluation: a basis index or a general vector.
#[derive(Clone, Copy)]
pub enum Arg<'a> {
    Basis(usize),
    General(&'a Vector),
}

/// Element of a cochain space: one module vector per canonical key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    space: CochainSpace,
    entries: Vec<Vector>,
}

impl Cochain {
    pub fn zero(space: CochainSpace) -> Self {
        Cochain {
            entries: vec![Vector::zero(space.mod_dim); space.index_count()],
            space,
        }
    }

    pub fn from_fn(space: CochainSpace, f: impl Fn(&CochainKey) -> Vector) -> Self {
        let entries = space
            .keys()
            .iter()
            .map(|k| {
                let v = f(k);
                assert_eq!(v.len(), space.mod_dim, "cochain value has wrong length");
                v
            })
            .collect();
        Cochain { space, entries }
    }

    /// Degree-1 cochain from a linear map (source = algebra, target = module).
    pub fn from_linear_map(map: &LinearMap) -> Self {
        let space = CochainSpace::new(1, map.source_dim(), map.target_dim());
        Cochain::from_fn(space, |k| match k {
            CochainKey::Single(i) => map.apply_basis(*i),
            _ => unreachable!(),
        })
    }

    pub fn to_linear_map(&self) -> LinearMap {
        assert_eq!(self.space.degree, 1, "only degree-1 cochains are linear maps");
        LinearMap::new(Mat::from_cols(&self.entries))
    }

    /// Degree-2 cochain from a fully skew trilinear table.
    pub fn from_two_cocycle(theta: &TwoCocycle3) -> Self {
        let space = CochainSpace::new(2, theta.alg_dim(), theta.space_dim());
        Cochain::from_fn(space, |k| match k {
            CochainKey::Higher { triple, .. } => theta.eval_basis(triple[0], triple[1], triple[2]),
            _ => unreachable!(),
        })
    }

    pub fn to_two_cocycle(&self) -> Result<TwoCocycle3> {
        if self.space.degree != 2 {
            return Err(Error::ShapeMismatch("only degree-2 cochains are trilinear tables".into()));
        }
        TwoCocycle3::new(
            self.space.alg_dim,
            self.space.mod_dim,
            self.space
                .keys()
                .iter()
                .zip(&self.entries)
                .map(|(k, v)| match k {
                    CochainKey::Higher { triple, .. } => (*triple, v.clone()),
                    _ => unreachable!(),
                }),
        )
    }

    pub fn space(&self) -> CochainSpace {
        self.space
    }

    pub fn degree(&self) -> usize {
        self.space.degree
    }

    pub fn entry(&self, key: &CochainKey) -> &Vector {
        &self.entries[self.space.key_position(key)]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.space, other.space);
        Cochain {
            space: self.space,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.space, other.space);
        Cochain {
            space: self.space,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Cochain {
        Cochain {
            space: self.space,
            entries: self.entries.iter().map(|v| v.scale(c)).collect(),
        }
    }

    /// All coefficients as one flat vector, key-major then coordinate.
    pub fn coeff_vector(&self) -> Vector {
        let mut out = Vector::zero(self.space.coeff_dim());
        for (i, v) in self.entries.iter().enumerate() {
            for j in 0..self.space.mod_dim {
                out.set(i * self.space.mod_dim + j, v.get(j).clone());
            }
        }
        out
    }

    pub fn from_coeff_vector(space: CochainSpace, coeffs: &Vector) -> Result<Cochain> {
        if coeffs.len() != space.coeff_dim() {
            return Err(Error::ShapeMismatch(format!(
                "coefficient vector has length {}, expected {}",
                coeffs.len(),
                space.coeff_dim()
            )));
        }
        let entries = (0..space.index_count())
            .map(|i| {
                Vector::new(
                    (0..space.mod_dim)
                        .map(|j| coeffs.get(i * space.mod_dim + j).clone())
                        .collect(),
                )
            })
            .collect();
        Ok(Cochain { space, entries })
    }

    /// Evaluate on basis indices (length 2n-1), canonicalizing by sign.
    pub fn eval_basis(&self, idx: &[usize]) -> Vector {
        let n = self.space.degree;
        assert_eq!(idx.len(), 2 * n - 1, "wrong argument count");
        if n == 1 {
            return self.entries[idx[0]].clone();
        }
        let mut sign = 1i64;
        let mut key_pairs = Vec::with_capacity(n - 2);
        for s in 0..(n - 2) {
            match sort2(idx[2 * s], idx[2 * s + 1]) {
                None => return Vector::zero(self.space.mod_dim),
                Some((p, sg)) => {
                    key_pairs.push(p);
                    sign *= sg;
                }
            }
        }
        let t = match sort3(idx[2 * n - 4], idx[2 * n - 3], idx[2 * n - 2]) {
            None => return Vector::zero(self.space.mod_dim),
            Some((t, sg)) => {
                sign *= sg;
                t
            }
        };
        let key = CochainKey::Higher { pairs: key_pairs, triple: t };
        let v = &self.entries[self.space.key_position(&key)];
        if sign == 1 {
            v.clone()
        } else {
            v.neg()
        }
    }

    /// Multilinear evaluation with a mix of basis indices and general
    /// vectors. Expands general arguments over their support.
    pub fn eval_mixed(&self, args: &[Arg]) -> Vector {
        match args.iter().position(|a| matches!(a, Arg::General(_))) {
            None => {
                let idx: Vec<usize> = args
                    .iter()
                    .map(|a| match a {
                        Arg::Basis(i) => *i,
                        _ => unreachable!(),
                    })
                    .collect();
                self.eval_basis(&idx)
            }
            Some(pos) => {
                let Arg::General(v) = args[pos] else { unreachable!() };
                let mut out = Vector::zero(self.space.mod_dim);
                for i in v.support() {
                    let mut inner: Vec<Arg> = args.to_vec();
                    inner[pos] = Arg::Basis(i);
                    out.add_scaled(v.get(i), &self.eval_mixed(&inner));
                }
                out
            }
        }
    }
}

/// The coboundary of the cochain complex of `alg` with coefficients in
/// `rho`: degree n to degree n+1.
///
/// With arguments x_1..x_{2n+1} the value is
/// `(-1)^{n+1} rho(x_{2n+1}, x_{2n-1}) f(x_1..x_{2n-2}, x_{2n})
///  + (-1)^{n+1} rho(x_{2n}, x_{2n+1}) f(x_1..x_{2n-1})
///  + sum_k (-1)^{k+1} rho(x_{2k-1}, x_{2k}) f(.. omit 2k-1, 2k ..)
///  + sum_{k, j>2k} (-1)^k f(.. omit 2k-1, 2k .. [x_{2k-1}, x_{2k}, x_j] ..)`.
pub fn ce_diff(alg: &ThreeLieAlgebra, rho: &Representation3, f: &Cochain) -> Result<Cochain> {
    let space = f.space();
    if space.alg_dim != alg.dim() || rho.alg_dim() != alg.dim() || rho.space_dim() != space.mod_dim {
        return Err(Error::ShapeMismatch("cochain does not match algebra/representation".into()));
    }
    let n = space.degree;
    let out_space = CochainSpace::new(n + 1, space.alg_dim, space.mod_dim);
    let sign_np1: i64 = if (n + 1) % 2 == 0 { 1 } else { -1 };
    let apply_sign = |s: i64, v: Vector| if s == 1 { v } else { v.neg() };

    Ok(Cochain::from_fn(out_space, |key| {
        let a = key.args(); // length 2n+1, basis indices
        let m = a.len();
        let mut out = Vector::zero(space.mod_dim);

        // rho(x_{2n+1}, x_{2n-1}) f(x_1.., x_{2n-2}, x_{2n})
        let mut idx: Vec<usize> = a[..m - 3].to_vec();
        idx.push(a[m - 2]);
        out.add_assign(&apply_sign(
            sign_np1,
            rho.apply_basis(a[m - 1], a[m - 3], &f.eval_basis(&idx)),
        ));

        // rho(x_{2n}, x_{2n+1}) f(x_1.., x_{2n-1})
        let idx: Vec<usize> = a[..m - 2].to_vec();
        out.add_assign(&apply_sign(
            sign_np1,
            rho.apply_basis(a[m - 2], a[m - 1], &f.eval_basis(&idx)),
        ));

        for k in 1..=n {
            let sign_k: i64 = if k % 2 == 0 { 1 } else { -1 };
            let omit = [2 * k - 2, 2 * k - 1];

            // rho(x_{2k-1}, x_{2k}) f(.. hat hat ..)
            let idx: Vec<usize> = (0..m).filter(|p| !omit.contains(p)).map(|p| a[p]).collect();
            out.add_assign(&apply_sign(
                -sign_k,
                rho.apply_basis(a[omit[0]], a[omit[1]], &f.eval_basis(&idx)),
            ));

            // f(.. hat hat .. [x_{2k-1}, x_{2k}, x_j] ..)
            for jj in (2 * k)..m {
                let bracket = alg.bracket_basis(a[omit[0]], a[omit[1]], a[jj]);
                let args: Vec<Arg> = (0..m)
                    .filter(|p| !omit.contains(p))
                    .map(|p| {
                        if p == jj {
                            Arg::General(&bracket)
                        } else {
                            Arg::Basis(a[p])
                        }
                    })
                    .collect();
                out.add_assign(&apply_sign(sign_k, f.eval_mixed(&args)));
            }
        }
        out
    }))
}

/// Matrix of [`ce_diff`] at the given degree over canonical coefficient
/// bases: columns are images of basis cochains.
pub fn ce_diff_matrix(alg: &ThreeLieAlgebra, rho: &Representation3, degree: usize) -> Result<Mat> {
    let space = CochainSpace::new(degree, alg.dim(), rho.space_dim());
    let out_space = CochainSpace::new(degree + 1, alg.dim(), rho.space_dim());
    let mut cols = Vec::with_capacity(space.coeff_dim());
    for i in 0..space.coeff_dim() {
        let basis = Cochain::from_coeff_vector(space, &Vector::unit(space.coeff_dim(), i))?;
        cols.push(ce_diff(alg, rho, &basis)?.coeff_vector());
    }
    if cols.is_empty() {
        return Ok(Mat::zero(out_space.coeff_dim(), 0));
    }
    Ok(Mat::from_cols(&cols))
}

/// Element of the wedge square of the algebra underlying a twisted operator:
/// the degree-0 twisted cochains. Coefficients over canonical pairs i < j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroCochain {
    dim: usize,
    coeffs: Vec<Rational>,
}

impl ZeroCochain {
    pub fn zero(dim: usize) -> Self {
        ZeroCochain {
            dim,
            coeffs: vec![Rational::zero(); pair_count(dim)],
        }
    }

    /// The wedge e_i ^ e_j (i != j; sign handled).
    pub fn single(dim: usize, i: usize, j: usize) -> Self {
        let mut z = ZeroCochain::zero(dim);
        let (p, sign) = sort2(i, j).expect("wedge of equal indices is zero");
        z.coeffs[pair_index(dim, p)] = if sign == 1 {
            Rational::from_integer(1.into())
        } else {
            Rational::from_integer((-1).into())
        };
        z
    }

    pub fn from_coeffs(dim: usize, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != pair_count(dim) {
            return Err(Error::ShapeMismatch(format!(
                "wedge coefficient vector has length {}, expected {}",
                coeffs.len(),
                pair_count(dim)
            )));
        }
        Ok(ZeroCochain { dim, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn add(&self, other: &ZeroCochain) -> ZeroCochain {
        assert_eq!(self.dim, other.dim);
        ZeroCochain {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> ZeroCochain {
        ZeroCochain {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Nonzero (pair, coefficient) entries.
    pub fn support(&self) -> Vec<([usize; 2], &Rational)> {
        pairs(self.dim)
            .into_iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }
}

/// `rho(X)` for a wedge X, as an operator matrix on V.
pub fn wedge_rho(rho: &Representation3, x: &ZeroCochain) -> Mat {
    let mut out = Mat::zero(rho.space_dim(), rho.space_dim());
    for (p, c) in x.support() {
        out = out.add(&rho.mat_basis(p[0], p[1]).scale(c));
    }
    out
}

/// `theta(X, y)` for a wedge X and an algebra vector y.
pub fn wedge_theta(theta: &TwoCocycle3, x: &ZeroCochain, y: &Vector) -> Vector {
    let mut out = Vector::zero(theta.space_dim());
    let units: Vec<Vector> = (0..theta.alg_dim()).map(|i| Vector::unit(theta.alg_dim(), i)).collect();
    for (p, c) in x.support() {
        out.add_scaled(c, &theta.eval(&units[p[0]], &units[p[1]], y));
    }
    out
}

/// `[X, y]` for a wedge X and an algebra vector y.
pub fn wedge_bracket(g: &ThreeLieAlgebra, x: &ZeroCochain, y: &Vector) -> Vector {
    let mut out = Vector::zero(g.dim());
    let units: Vec<Vector> = (0..g.dim()).map(|i| Vector::unit(g.dim(), i)).collect();
    for (p, c) in x.support() {
        out.add_scaled(c, &g.bracket(&units[p[0]], &units[p[1]], y));
    }
    out
}

/// `rho_Theta(u, v)x = [Tu, Tv, x] - T(rho(Tv, x)u + rho(x, Tu)v + theta(x, Tu, Tv))`
/// for u, v in V and x in g.
pub fn rho_theta(op: &TwistedOperator, u: &Vector, v: &Vector, x: &Vector) -> Vector {
    let ctx = op.context();
    let t = op.map();
    let (tu, tv) = (t.apply(u), t.apply(v));
    let out = ctx.g.bracket(&tu, &tv, x);
    let mut inner = ctx.rho.apply(&tv, x, u);
    inner.add_assign(&ctx.rho.apply(x, &tu, v));
    inner.add_assign(&ctx.theta.eval(x, &tu, &tv));
    out.sub(&t.apply(&inner))
}

/// Assemble `rho_Theta` as a representation of (V, [.,.,.]_T) on g.
pub fn rho_theta_rep(op: &TwistedOperator) -> Representation3 {
    let vd = op.v_dim();
    let gd = op.g_dim();
    Representation3::from_fn(vd, gd, |i, j| {
        let u = Vector::unit(vd, i);
        let v = Vector::unit(vd, j);
        Mat::from_cols(
            &(0..gd)
                .map(|x| rho_theta(op, &u, &v, &Vector::unit(gd, x)))
                .collect::<Vec<_>>(),
        )
    })
    .expect("twisted representation shapes are consistent")
}

/// The expanded twisted coboundary formula, written directly against the
/// operator data (bracket of g, rho, theta, T). Independent transcription of
/// the printed formula; cross-checked against the generic route on every
/// [`TwistedComplex::diff`] call.
pub fn twisted_diff_expanded(op: &TwistedOperator, f: &Cochain) -> Result<Cochain> {
    let ctx = op.context();
    let t = op.map();
    let space = f.space();
    if space.alg_dim != op.v_dim() || space.mod_dim != op.g_dim() {
        return Err(Error::ShapeMismatch("twisted cochain has wrong shape".into()));
    }
    let n = space.degree;
    let vd = op.v_dim();
    let units: Vec<Vector> = (0..vd).map(|i| Vector::unit(vd, i)).collect();
    let tu: Vec<Vector> = (0..vd).map(|i| t.apply_basis(i)).collect();
    let out_space = CochainSpace::new(n + 1, space.alg_dim, space.mod_dim);
    let sign_np1: i64 = if (n + 1) % 2 == 0 { 1 } else { -1 };
    let apply_sign = |s: i64, v: Vector| if s == 1 { v } else { v.neg() };

    // [T u_a, T u_b, fv] - T rho(T u_b, fv) u_a ... with the argument order
    // of the printed formula: block(a, b, fv) for the pair (u_a, u_b).
    let block = |a: usize, b: usize, fv: &Vector| -> Vector {
        let mut out = ctx.g.bracket(&tu[a], &tu[b], fv);
        out = out.sub(&t.apply(&ctx.rho.apply(&tu[b], fv, &units[a])));
        out = out.sub(&t.apply(&ctx.rho.apply(fv, &tu[a], &units[b])));
        out = out.sub(&t.apply(&ctx.theta.eval(fv, &tu[a], &tu[b])));
        out
    };

    Ok(Cochain::from_fn(out_space, |key| {
        let a = key.args();
        let m = a.len();
        let mut out = Vector::zero(space.mod_dim);

        // Pair (u_{2n+1}, u_{2n-1}) against f(u_1.., u_{2n-2}, u_{2n}).
        let mut idx: Vec<usize> = a[..m - 3].to_vec();
        idx.push(a[m - 2]);
        out.add_assign(&apply_sign(sign_np1, block(a[m - 1], a[m - 3], &f.eval_basis(&idx))));

        // Pair (u_{2n}, u_{2n+1}) against f(u_1.., u_{2n-1}).
        let idx: Vec<usize> = a[..m - 2].to_vec();
        out.add_assign(&apply_sign(sign_np1, block(a[m - 2], a[m - 1], &f.eval_basis(&idx))));

        for k in 1..=n {
            let sign_k: i64 = if k % 2 == 0 { 1 } else { -1 };
            let omit = [2 * k - 2, 2 * k - 1];

            let idx: Vec<usize> = (0..m).filter(|p| !omit.contains(p)).map(|p| a[p]).collect();
            out.add_assign(&apply_sign(-sign_k, block(a[omit[0]], a[omit[1]], &f.eval_basis(&idx))));

            for jj in (2 * k)..m {
                // Replace u_j by the induced-bracket expansion written out:
                // rho(Tu_{2k-1}, Tu_{2k})u_j + rho(Tu_{2k}, Tu_j)u_{2k-1}
                // + rho(Tu_j, Tu_{2k-1})u_{2k} + theta(Tu_{2k-1}, Tu_{2k}, Tu_j).
                let (x, y, z) = (a[omit[0]], a[omit[1]], a[jj]);
                let mut repl = ctx.rho.apply(&tu[x], &tu[y], &units[z]);
                repl.add_assign(&ctx.rho.apply(&tu[y], &tu[z], &units[x]));
                repl.add_assign(&ctx.rho.apply(&tu[z], &tu[x], &units[y]));
                repl.add_assign(&ctx.theta.eval(&tu[x], &tu[y], &tu[z]));
                let args: Vec<Arg> = (0..m)
                    .filter(|p| !omit.contains(p))
                    .map(|p| {
                        if p == jj {
                            Arg::General(&repl)
                        } else {
                            Arg::Basis(a[p])
                        }
                    })
                    .collect();
                out.add_assign(&apply_sign(sign_k, f.eval_mixed(&args)));
            }
        }
        out
    }))
}

/// Dimensions of one twisted cohomology group plus canonical representatives
/// (coefficient vectors in the canonical cochain basis).
#[derive(Debug, Clone)]
pub struct CohomologyReport {
    pub degree: usize,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub dim_cohomology: usize,
    pub representatives: Vec<Vector>,
}

/// The twisted cochain complex of a validated operator: degree 0 is the
/// wedge square of g with the `delta` differential, degrees >= 1 are
/// cochains on V with values in g under the twisted coboundary.
pub struct TwistedComplex {
    op: TwistedOperator,
    alg_v: ThreeLieAlgebra,
    rep_g: Representation3,
}

pub const DEFAULT_INDEX_CAP: usize = 20_000;

impl TwistedComplex {
    /// Validates the operator (context axioms plus the twisted identity) and
    /// prepares the induced algebra on V and the twisted representation on g.
    pub fn new(op: &TwistedOperator) -> Result<TwistedComplex> {
        let report = check_twisted(op);
        if !report.passed() {
            return Err(Error::ValidationFailure(
                "operator fails the twisted identity; no complex".into(),
            ));
        }
        let alg_v = crate::twistop::induced_bracket(op)?;
        Ok(TwistedComplex {
            op: op.clone(),
            alg_v,
            rep_g: rho_theta_rep(op),
        })
    }

    pub fn operator(&self) -> &TwistedOperator {
        &self.op
    }

    /// The induced 3-Lie algebra (V, [.,.,.]_T).
    pub fn induced_algebra(&self) -> &ThreeLieAlgebra {
        &self.alg_v
    }

    /// The representation of (V, [.,.,.]_T) on g.
    pub fn twisted_representation(&self) -> &Representation3 {
        &self.rep_g
    }

    pub fn space(&self, degree: usize) -> CochainSpace {
        CochainSpace::new(degree, self.op.v_dim(), self.op.g_dim())
    }

    /// Coefficient dimension at a degree, degree 0 included.
    pub fn coeff_dim(&self, degree: usize) -> usize {
        if degree == 0 {
            pair_count(self.op.g_dim())
        } else {
            self.space(degree).coeff_dim()
        }
    }

    /// Twisted coboundary of a degree >= 1 cochain. Computed by the generic
    /// route and by the expanded formula; any mismatch is surfaced as
    /// `FormulaDisagreement` naming the first differing tuple.
    pub fn diff(&self, f: &Cochain) -> Result<Cochain> {
        let generic = ce_diff(&self.alg_v, &self.rep_g, f)?;
        let expanded = twisted_diff_expanded(&self.op, f)?;
        if generic != expanded {
            let space = generic.space();
            for key in space.keys() {
                if generic.entry(&key) != expanded.entry(&key) {
                    return Err(Error::FormulaDisagreement(format!(
                        "generic and expanded twisted differentials differ at {}",
                        key.label()
                    )));
                }
            }
        }
        Ok(generic)
    }

    /// `delta(X)v = T(rho(X)v + theta(X, Tv)) - [X, Tv]`, extended linearly
    /// over the pair coefficients of X. The result is closed, and that is
    /// checked on every call.
    pub fn delta(&self, x: &ZeroCochain) -> Result<Cochain> {
        let ctx = self.op.context();
        if x.dim() != self.op.g_dim() {
            return Err(Error::ShapeMismatch("wedge element has wrong dimension".into()));
        }
        let t = self.op.map();
        let out = Cochain::from_fn(self.space(1), |key| {
            let CochainKey::Single(i) = key else { unreachable!() };
            let v = Vector::unit(self.op.v_dim(), *i);
            let tv = t.apply(&v);
            let mut inner = wedge_rho(&ctx.rho, x).mul_vec(&v);
            inner.add_assign(&wedge_theta(&ctx.theta, x, &tv));
            t.apply(&inner).sub(&wedge_bracket(&ctx.g, x, &tv))
        });
        let closed = self.diff(&out)?;
        if !closed.is_zero() {
            return Err(Error::ValidationFailure(
                "delta produced a non-closed 1-cochain; differential inconsistent".into(),
            ));
        }
        Ok(out)
    }

    /// Matrix of the twisted differential out of `degree` (0 allowed).
    pub fn diff_matrix(&self, degree: usize) -> Result<Mat> {
        if degree == 0 {
            let gd = self.op.g_dim();
            let target = self.coeff_dim(1);
            let mut cols = Vec::with_capacity(pair_count(gd));
            for p in pairs(gd) {
                let delta = self.delta(&ZeroCochain::single(gd, p[0], p[1]))?;
                cols.push(delta.coeff_vector());
            }
            return Ok(if cols.is_empty() {
                Mat::zero(target, 0)
            } else {
                Mat::from_cols(&cols)
            });
        }
        let space = self.space(degree);
        let mut cols = Vec::with_capacity(space.coeff_dim());
        for i in 0..space.coeff_dim() {
            let basis = Cochain::from_coeff_vector(space, &Vector::unit(space.coeff_dim(), i))?;
            cols.push(self.diff(&basis)?.coeff_vector());
        }
        Ok(if cols.is_empty() {
            Mat::zero(self.coeff_dim(degree + 1), 0)
        } else {
            Mat::from_cols(&cols)
        })
    }

    /// Echelon basis (rows + pivots) of the coboundary space at `degree`
    /// (image of the differential out of `degree - 1`).
    pub fn coboundary_echelon(&self, degree: usize) -> Result<(Vec<Vector>, Vec<usize>)> {
        assert!(degree >= 1);
        let m = self.diff_matrix(degree - 1)?;
        let cols: Vec<Vector> = (0..m.cols()).map(|c| m.col(c)).collect();
        Ok(exactla::echelon_basis(&cols))
    }

    /// Cocycle, coboundary and cohomology dimensions at degree `n`, plus
    /// canonical representatives (kernel vectors reduced against the
    /// coboundary echelon basis).
    pub fn cohomology_dims(&self, n: usize, cap: usize) -> Result<CohomologyReport> {
        let mut involved = vec![self.coeff_dim(n), self.coeff_dim(n + 1)];
        if n >= 1 {
            involved.push(self.coeff_dim(n - 1));
        }
        for d in involved {
            if d > cap {
                return Err(Error::TooLarge(format!(
                    "coefficient space of dimension {d} exceeds the cap {cap}"
                )));
            }
        }

        let d_n = self.diff_matrix(n)?;
        let cocycles = d_n.kernel_basis();
        let coboundaries: Vec<Vector> = if n == 0 {
            Vec::new()
        } else {
            let d_prev = self.diff_matrix(n - 1)?;
            (0..d_prev.cols()).map(|c| d_prev.col(c)).collect()
        };

        let dim_h = exactla::quotient_dim(&cocycles, &coboundaries)?;
        let (b_basis, b_pivots) = exactla::echelon_basis(&coboundaries);
        let dim_b = b_basis.len();
        let dim_z = cocycles.len();

        // Representatives: reduce kernel vectors modulo coboundaries, keep
        // the ones that extend the span, in kernel order.
        let mut representatives = Vec::new();
        let mut span = b_basis.clone();
        for z in &cocycles {
            let reduced = exactla::reduce_mod_echelon(&b_basis, &b_pivots, z);
            if reduced.is_zero() {
                continue;
            }
            let mut candidate = span.clone();
            candidate.push(reduced.clone());
            let (echelon, _) = exactla::echelon_basis(&candidate);
            if echelon.len() > span.len() {
                span = echelon;
                representatives.push(reduced);
            }
        }
        debug_assert_eq!(representatives.len(), dim_h);

        Ok(CohomologyReport {
            degree: n,
            dim_cocycles: dim_z,
            dim_coboundaries: dim_b,
            dim_cohomology: dim_h,
            representatives,
        })
    }
}
