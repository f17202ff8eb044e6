#![allow(dead_code)]

//! Shared fixtures, randomized generators of validated objects, and
//! independent oracles for the integration suites.
//!
//! Generators never assume an axiom: every candidate is certified by the
//! public checkers before it is handed to a test, and searches are exact
//! (kernel computations over the rationals, seeded sampling of small
//! coefficients).

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use trilie_core::cohomology::{ce_diff_matrix, Cochain, CochainSpace};
use trilie_core::exactla::{rat, rat_int, Mat, Rational, Vector};
use trilie_core::induce::{
    check_trace_lie, check_twisted_lie, TraceMap, TwistedOperatorLie,
};
use trilie_core::multiindex::{pair_count, pairs, sort2, sort3, triples};
use trilie_core::nslie::{check_3ns, check_ns_binary, from_twisted_ns, NSLieAlgebra, ThreeNSLieAlgebra};
use trilie_core::structures::{
    check_cocycle3, check_cocycle_lie, check_filippov, check_jacobi, check_rep3, check_rep_lie,
    LieAlgebra, LinearMap, Representation3, RepresentationLie, ThreeLieAlgebra, TwoCocycle3,
    TwoCocycleLie,
};
use trilie_core::twistop::{
    gauge_transform, inverse_cochain_operator, nijenhuis_package, TwistedContext,
    TwistedOperator,
};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn rrat(rng: &mut StdRng) -> Rational {
    rat(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

pub fn rrat_nonzero(rng: &mut StdRng) -> Rational {
    loop {
        let r = rrat(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

pub fn e(dim: usize, i: usize) -> Vector {
    Vector::unit(dim, i)
}

pub fn vec_i64(v: Vec<i64>) -> Vector {
    Vector::new(v.into_iter().map(rat_int).collect())
}

pub fn mat_i64(rows: Vec<Vec<i64>>) -> Mat {
    Mat::from_rows(
        rows.into_iter()
            .map(|r| r.into_iter().map(rat_int).collect())
            .collect(),
    )
}

pub fn random_vector(dim: usize, rng: &mut StdRng) -> Vector {
    Vector::new((0..dim).map(|_| rrat(rng)).collect())
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut StdRng) -> Mat {
    let entries: Vec<Vec<Rational>> = (0..rows)
        .map(|_| (0..cols).map(|_| rrat(rng)).collect())
        .collect();
    Mat::from_rows(entries)
}

pub fn random_cochain(space: CochainSpace, rng: &mut StdRng) -> Cochain {
    let coeffs = Vector::new((0..space.coeff_dim()).map(|_| rrat(rng)).collect());
    Cochain::from_coeff_vector(space, &coeffs).unwrap()
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

/// dim 3, [e1,e2,e3] = e2.
pub fn a3() -> ThreeLieAlgebra {
    ThreeLieAlgebra::new(3, vec![([0, 1, 2], e(3, 1))]).unwrap()
}

/// dim 3 Lie algebra, [e1,e2] = e2, e3 central.
pub fn l3() -> LieAlgebra {
    LieAlgebra::new(3, vec![([0, 1], e(3, 1))]).unwrap()
}

/// [e1,e2] = lambda e2 with e3 central.
pub fn l3_scaled(lambda: &Rational) -> LieAlgebra {
    LieAlgebra::new(3, vec![([0, 1], e(3, 1).scale(lambda))]).unwrap()
}

/// dim 4 Heisenberg-with-center: [e1,e2] = e3.
pub fn heis4() -> LieAlgebra {
    LieAlgebra::new(4, vec![([0, 1], e(4, 2))]).unwrap()
}

/// sl2 basis (h, x, y): [h,x] = 2x, [h,y] = -2y, [x,y] = h.
pub fn sl2() -> LieAlgebra {
    LieAlgebra::new(
        3,
        vec![
            ([0, 1], e(3, 1).scale(&rat_int(2))),
            ([0, 2], e(3, 2).scale(&rat_int(-2))),
            ([1, 2], e(3, 0)),
        ],
    )
    .unwrap()
}

/// dim 4 ternary table [e1,e2,e3] = e4, [e1,e2,e4] = e3.
pub fn b4() -> ThreeLieAlgebra {
    ThreeLieAlgebra::new(4, vec![([0, 1, 2], e(4, 3)), ([0, 1, 3], e(4, 2))]).unwrap()
}

pub fn n_dcf(d: &Rational, c: &Rational, f: &Rational) -> LinearMap {
    LinearMap::new(Mat::from_rows(vec![
        vec![d.clone(), Rational::zero(), Rational::zero()],
        vec![Rational::zero(), c.clone(), f.clone()],
        vec![Rational::zero(), Rational::zero(), c.clone()],
    ]))
}

pub fn package_235() -> trilie_core::twistop::NijenhuisPackage {
    nijenhuis_package(&a3(), &n_dcf(&rat_int(2), &rat_int(3), &rat_int(5))).unwrap()
}

pub fn zero_op(g: ThreeLieAlgebra, rho: Representation3, theta: TwoCocycle3) -> TwistedOperator {
    let v = rho.space_dim();
    let gd = g.dim();
    TwistedOperator::new(
        TwistedContext::new(g, rho, theta).unwrap(),
        LinearMap::zero(gd, v),
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// Randomized validated generators
// ---------------------------------------------------------------------------

/// Pool of Lie algebras, all certified against Jacobi.
pub fn lie_pool(rng: &mut StdRng) -> Vec<LieAlgebra> {
    let out = vec![
        l3(),
        l3_scaled(&rrat_nonzero(rng)),
        heis4(),
        sl2(),
        LieAlgebra::abelian(3),
    ];
    for g in &out {
        assert!(check_jacobi(g).passed());
    }
    out
}

/// Random trace form of a Lie algebra: a certified random element of the
/// annihilator of the span of all brackets.
pub fn random_trace(g: &LieAlgebra, rng: &mut StdRng) -> TraceMap {
    let rows: Vec<Vec<Rational>> = pairs(g.dim())
        .into_iter()
        .map(|[i, j]| g.bracket_basis(i, j).entries().to_vec())
        .collect();
    let kernel = if rows.is_empty() {
        (0..g.dim()).map(|i| Vector::unit(g.dim(), i)).collect()
    } else {
        Mat::from_rows(rows).kernel_basis()
    };
    let mut coeffs = Vector::zero(g.dim());
    for k in &kernel {
        coeffs.add_scaled(&rrat(rng), k);
    }
    let tau = TraceMap::new(coeffs);
    assert!(check_trace_lie(g, &tau).passed());
    tau
}

/// Random certified 2-cocycle of (g, rho), sampled from the exact kernel of
/// the degree-2 differential.
pub fn random_cocycle3(g: &ThreeLieAlgebra, rho: &Representation3, rng: &mut StdRng) -> TwoCocycle3 {
    let m = ce_diff_matrix(g, rho, 2).unwrap();
    let kernel = m.kernel_basis();
    let space = CochainSpace::new(2, g.dim(), rho.space_dim());
    let mut coeffs = Vector::zero(space.coeff_dim());
    for k in &kernel {
        coeffs.add_scaled(&rrat(rng), k);
    }
    let theta = Cochain::from_coeff_vector(space, &coeffs)
        .unwrap()
        .to_two_cocycle()
        .unwrap();
    assert!(check_cocycle3(g, rho, &theta).passed());
    theta
}

/// Pool of validated ternary contexts (algebra, representation, cocycle).
pub fn context_pool(rng: &mut StdRng) -> Vec<(ThreeLieAlgebra, Representation3, TwoCocycle3)> {
    let mut out = Vec::new();
    let mut push = |g: ThreeLieAlgebra, rho: Representation3, rng: &mut StdRng| {
        let theta = random_cocycle3(&g, &rho, rng);
        out.push((g, rho, theta));
    };

    let g = a3();
    push(g.clone(), Representation3::adjoint(&g), rng);
    push(g.clone(), Representation3::zero(3, 2), rng);
    push(g.clone(), Representation3::zero(3, 1), rng);

    let g = b4();
    push(g.clone(), Representation3::adjoint(&g), rng);

    let g = ThreeLieAlgebra::abelian(2);
    push(g.clone(), Representation3::zero(2, 2), rng);

    // Induced contexts from the binary world.
    for lie in lie_pool(rng) {
        let tau = random_trace(&lie, rng);
        if let Ok(alg) = trilie_core::induce::induce_3lie(&lie, &tau) {
            let ad = RepresentationLie::adjoint(&lie);
            if let Ok(rep) = trilie_core::induce::induce_rep(&lie, &ad, &tau) {
                push(alg, rep, rng);
            }
        }
    }

    for (g, rho, theta) in &out {
        assert!(check_filippov(g).passed());
        assert!(check_rep3(g, rho).passed());
        assert!(check_cocycle3(g, rho, theta).passed());
    }
    out
}

/// Random certified Nijenhuis pairs (algebra, operator).
pub fn nijenhuis_pool(rng: &mut StdRng) -> Vec<(ThreeLieAlgebra, LinearMap)> {
    let mut out = Vec::new();
    // The triangular family on a3 (any parameters work; dc != 0 keeps the
    // worked example alive downstream).
    for _ in 0..4 {
        let d = rrat_nonzero(rng);
        let c = rrat_nonzero(rng);
        let f = rrat(rng);
        out.push((a3(), n_dcf(&d, &c, &f)));
    }
    // Scalar operators on every pooled algebra.
    for g in [a3(), b4(), ThreeLieAlgebra::abelian(3)] {
        let lambda = rrat(rng);
        let dim = g.dim();
        out.push((g.clone(), LinearMap::identity(dim).scale(&lambda)));
        out.push((g, LinearMap::zero(dim, dim)));
    }
    for (g, n) in &out {
        assert!(trilie_core::twistop::nijenhuis_check(g, n).passed());
    }
    out
}

/// Pool of validated twisted operators, drawn from every construction the
/// crate provides plus exact gauge searches.
pub fn operator_pool(rng: &mut StdRng) -> Vec<TwistedOperator> {
    let mut out: Vec<TwistedOperator> = Vec::new();

    // Zero operators on random contexts.
    for (g, rho, theta) in context_pool(rng) {
        out.push(zero_op(g, rho, theta));
    }

    // Nijenhuis identity operators.
    for (g, n) in nijenhuis_pool(rng) {
        out.push(nijenhuis_package(&g, &n).unwrap().op);
    }

    // Inverses of random invertible 1-cochains on the adjoint context.
    let g = a3();
    let rho = Representation3::adjoint(&g);
    for _ in 0..4 {
        let mut m = random_matrix(3, 3, rng);
        // Dominant diagonal keeps the sample invertible most of the time;
        // retry otherwise.
        for i in 0..3 {
            m.set(i, i, m.get(i, i) + rat_int(5));
        }
        if let Ok(op) = inverse_cochain_operator(&g, &rho, &LinearMap::new(m)) {
            out.push(op);
        }
    }

    // A projection-style operator with zero cocycle.
    out.push(
        TwistedOperator::new(
            TwistedContext::new(g.clone(), rho.clone(), TwoCocycle3::zero(3, 3)).unwrap(),
            LinearMap::new(mat_i64(vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 0]])),
        )
        .unwrap(),
    );

    // Gauge transforms of a few pool members by admissible nonzero cocycle
    // directions.
    let mut gauged = Vec::new();
    for op in out.iter().take(6) {
        for theta1 in one_cocycles(op).into_iter().take(1) {
            let theta1 = theta1.scale(&rrat_nonzero(rng));
            if trilie_core::twistop::check_admissible(op, &theta1).unwrap_or(false) {
                if let Ok(g) = gauge_transform(op, &theta1) {
                    gauged.push(g);
                }
            }
        }
    }
    out.extend(gauged);

    for op in &out {
        op.validate().unwrap();
    }
    out
}

/// Closed 1-cochains of the plain complex of the operator context, from the
/// exact kernel.
pub fn one_cocycles(op: &TwistedOperator) -> Vec<LinearMap> {
    let ctx = op.context();
    let m = ce_diff_matrix(&ctx.g, &ctx.rho, 1).unwrap();
    let space = CochainSpace::new(1, ctx.g.dim(), ctx.rho.space_dim());
    m.kernel_basis()
        .into_iter()
        .map(|coeffs| Cochain::from_coeff_vector(space, &coeffs).unwrap().to_linear_map())
        .collect()
}

/// Random certified binary cocycle of (g, rho), from the exact kernel of the
/// stacked identity residuals.
pub fn random_cocycle_lie(g: &LieAlgebra, rho: &RepresentationLie, rng: &mut StdRng) -> TwoCocycleLie {
    let d = g.dim();
    let vd = rho.space_dim();
    let cols: Vec<[usize; 2]> = pairs(d);
    let unknowns = cols.len() * vd;
    // Residuals of the cocycle identity for each unit table.
    let residual_of = |theta: &TwoCocycleLie| -> Vector {
        let units: Vec<Vector> = (0..d).map(|i| Vector::unit(d, i)).collect();
        let mut stacked = Vec::new();
        for [i, j, k] in triples(d) {
            let (x, y, z) = (&units[i], &units[j], &units[k]);
            let mut res = rho.apply(x, &theta.eval(y, z));
            res.add_assign(&rho.apply(y, &theta.eval(z, x)));
            res.add_assign(&rho.apply(z, &theta.eval(x, y)));
            res.add_assign(&theta.eval(x, &g.bracket(y, z)));
            res.add_assign(&theta.eval(y, &g.bracket(z, x)));
            res.add_assign(&theta.eval(z, &g.bracket(x, y)));
            stacked.extend(res.entries().to_vec());
        }
        Vector::new(stacked)
    };
    let mut columns = Vec::new();
    for (p, _) in cols.iter().enumerate() {
        for c in 0..vd {
            let theta = TwoCocycleLie::new(d, vd, vec![(cols[p], Vector::unit(vd, c))]).unwrap();
            columns.push(residual_of(&theta));
        }
    }
    let kernel = if columns.is_empty() {
        Vec::new()
    } else {
        Mat::from_cols(&columns).kernel_basis()
    };
    let mut coeffs = Vector::zero(unknowns);
    for k in &kernel {
        coeffs.add_scaled(&rrat(rng), k);
    }
    let entries: Vec<([usize; 2], Vector)> = cols
        .iter()
        .enumerate()
        .map(|(p, key)| {
            (
                *key,
                Vector::new((0..vd).map(|c| coeffs.get(p * vd + c).clone()).collect()),
            )
        })
        .collect();
    let theta = TwoCocycleLie::new(d, vd, entries).unwrap();
    assert!(check_cocycle_lie(g, rho, &theta).passed());
    theta
}

/// Random certified binary twisted operators paired with trace forms, for
/// the induction and diagram suites.
pub fn binary_op_pool(rng: &mut StdRng) -> Vec<(TwistedOperatorLie, TraceMap)> {
    let mut out = Vec::new();

    // Family on [e1,e2] = lambda e2 with the adjoint action: maps with image
    // avoiding e2 and no e1-column are twisted (certified below).
    for _ in 0..6 {
        let lambda = rrat_nonzero(rng);
        let g = l3_scaled(&lambda);
        let rho = RepresentationLie::adjoint(&g);
        let theta = TwoCocycleLie::zero(3, 3);
        let t = LinearMap::new(Mat::from_rows(vec![
            vec![Rational::zero(), rrat(rng), Rational::zero()],
            vec![Rational::zero(), Rational::zero(), Rational::zero()],
            vec![Rational::zero(), rrat(rng), rrat(rng)],
        ]));
        let op = TwistedOperatorLie::new(g.clone(), rho, theta, t).unwrap();
        let tau = random_trace(&g, rng);
        out.push((op, tau));
    }

    // Heisenberg family: anything into the center is twisted.
    for _ in 0..3 {
        let g = heis4();
        let rho = RepresentationLie::adjoint(&g);
        let theta = TwoCocycleLie::zero(4, 4);
        let mut m = Mat::zero(4, 4);
        for c in 0..4 {
            m.set(2, c, rrat(rng));
            m.set(3, c, rrat(rng));
        }
        let op = TwistedOperatorLie::new(g.clone(), rho, theta, LinearMap::new(m)).unwrap();
        let tau = random_trace(&g, rng);
        out.push((op, tau));
    }

    // Zero representation with a nonzero cocycle: V = K^3, theta hits a
    // coordinate the operator kills.
    for _ in 0..3 {
        let lambda = rrat_nonzero(rng);
        let g = l3_scaled(&lambda);
        let rho = RepresentationLie::zero(3, 3);
        let w = rrat_nonzero(rng);
        let theta = TwoCocycleLie::new(
            3,
            3,
            vec![
                ([0, 2], e(3, 2).scale(&w)),
                ([0, 1], random_vector(3, rng)),
            ],
        )
        .unwrap();
        let t = LinearMap::new(mat_i64(vec![vec![1, 0, 0], vec![0, 0, 0], vec![0, 1, 0]]));
        let op = TwistedOperatorLie::new(g.clone(), rho, theta, t).unwrap();
        let tau = random_trace(&g, rng);
        out.push((op, tau));
    }

    // T = 0 degenerate members.
    let g = l3();
    out.push((
        TwistedOperatorLie::new(
            g.clone(),
            RepresentationLie::adjoint(&g),
            TwoCocycleLie::zero(3, 3),
            LinearMap::zero(3, 3),
        )
        .unwrap(),
        random_trace(&g, rng),
    ));

    for (op, tau) in &out {
        assert!(check_twisted_lie(op).passed(), "pool member fails the binary identity");
        assert!(check_trace_lie(&op.g, tau).passed());
        assert!(check_cocycle_lie(&op.g, &op.rho, &op.theta).passed());
        assert!(check_rep_lie(&op.g, &op.rho).passed());
    }
    out
}

/// Validated ternary NS structures from both available routes. Raw 5-tuple
/// validation is cubic in storage at dimension 4, so only a couple of
/// dimension-4 members are kept per pool.
pub fn threens_pool(rng: &mut StdRng) -> Vec<ThreeNSLieAlgebra> {
    let mut out = Vec::new();
    let mut dim4 = 0usize;
    for op in operator_pool(rng) {
        if op.v_dim() >= 4 {
            dim4 += 1;
            if dim4 > 1 {
                continue;
            }
        }
        out.push(from_twisted_ns(&op).unwrap());
    }
    for (g, n) in nijenhuis_pool(rng) {
        if g.dim() >= 4 {
            continue;
        }
        out.push(trilie_core::nslie::from_nijenhuis_ns(&g, &n).unwrap());
    }
    for a in &out {
        assert!(check_3ns(a).passed());
    }
    out
}

/// Validated binary NS structures with trace forms.
pub fn ns_binary_pool(rng: &mut StdRng) -> Vec<(NSLieAlgebra, TraceMap)> {
    let mut out = Vec::new();
    for (op, tau) in binary_op_pool(rng) {
        let ns = trilie_core::induce::ns_from_binary_twisted(&op).unwrap();
        // Pull the form back along T; it kills the star bracket.
        let tau_v = TraceMap::new(Mat::transpose(op.t.matrix()).mul_vec(tau.coeffs()));
        assert!(trilie_core::induce::check_trace_ns(&ns, &tau_v).passed());
        out.push((ns, tau_v));
    }
    // curly = 0 with Lie tables.
    out.push((
        NSLieAlgebra::new(3, vec![], vec![([0, 1], e(3, 1))]).unwrap(),
        TraceMap::new(vec_i64(vec![0, 0, 1])),
    ));
    for (a, _) in &out {
        assert!(check_ns_binary(a).passed());
    }
    out
}

// ---------------------------------------------------------------------------
// Independent oracles
// ---------------------------------------------------------------------------

/// Rank by fraction-free Bareiss elimination on the denominator-cleared
/// integer matrix. Deliberately a different algorithm from the library's
/// reduced-echelon routine.
pub fn oracle_rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let nrows = rows.len();
    let ncols = rows[0].len();
    // Clear denominators row by row.
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let mut lcm = BigInt::one();
            for x in row {
                let d = x.denom();
                let g = num_integer::Integer::gcd(&lcm, d);
                lcm = lcm / g * d;
            }
            row.iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();

    let mut rank = 0usize;
    let mut prev = BigInt::one();
    let mut row = 0usize;
    for col in 0..ncols {
        if row >= nrows {
            break;
        }
        let pivot = (row..nrows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        for r in (row + 1)..nrows {
            for c in (col + 1)..ncols {
                let num = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        row += 1;
        rank += 1;
    }
    rank
}

/// One mixed argument of the brute-force evaluator.
#[derive(Clone)]
pub enum MixArg<'a> {
    Basis(usize),
    Vec(&'a Vector),
}

/// Evaluate the unit cochain (key position `pos`, module coordinate `coord`)
/// of `space` at mixed arguments, canonicalizing signs locally.
fn unit_eval(space: CochainSpace, pos: usize, coord: usize, args: &[MixArg]) -> Vector {
    if let Some(vpos) = args.iter().position(|a| matches!(a, MixArg::Vec(_))) {
        let MixArg::Vec(v) = &args[vpos] else { unreachable!() };
        let mut out = Vector::zero(space.mod_dim);
        for i in 0..v.len() {
            if v.get(i).is_zero() {
                continue;
            }
            let mut sub: Vec<MixArg> = args.to_vec();
            sub[vpos] = MixArg::Basis(i);
            out.add_scaled(v.get(i), &unit_eval(space, pos, coord, &sub));
        }
        return out;
    }
    let idx: Vec<usize> = args
        .iter()
        .map(|a| match a {
            MixArg::Basis(i) => *i,
            _ => unreachable!(),
        })
        .collect();
    let n = space.degree;
    let mut sign = 1i64;
    let key = if n == 1 {
        trilie_core::cohomology::CochainKey::Single(idx[0])
    } else {
        let mut ps = Vec::new();
        for s in 0..(n - 2) {
            match sort2(idx[2 * s], idx[2 * s + 1]) {
                None => return Vector::zero(space.mod_dim),
                Some((p, sg)) => {
                    ps.push(p);
                    sign *= sg;
                }
            }
        }
        match sort3(idx[2 * n - 4], idx[2 * n - 3], idx[2 * n - 2]) {
            None => return Vector::zero(space.mod_dim),
            Some((t, sg)) => {
                sign *= sg;
                trilie_core::cohomology::CochainKey::Higher { pairs: ps, triple: t }
            }
        }
    };
    if space.key_position(&key) != pos {
        return Vector::zero(space.mod_dim);
    }
    let mut out = Vector::zero(space.mod_dim);
    out.set(coord, if sign == 1 { rat_int(1) } else { rat_int(-1) });
    out
}

/// Brute-force twisted differential matrix at `degree` >= 1: for every unit
/// coefficient of the full space, evaluate the operator expansion of the
/// coboundary at every canonical output tuple. A from-scratch transcription,
/// sharing only the scalar type and index enumeration with the library.
pub fn oracle_diff_matrix(op: &TwistedOperator, degree: usize) -> Vec<Vec<Rational>> {
    let ctx = op.context();
    let t = op.map();
    let (vd, gd) = (op.v_dim(), op.g_dim());
    let space = CochainSpace::new(degree, vd, gd);
    let out_space = CochainSpace::new(degree + 1, vd, gd);
    let units: Vec<Vector> = (0..vd).map(|i| Vector::unit(vd, i)).collect();

    let n = degree;
    let sign_np1: i64 = if (n + 1) % 2 == 0 { 1 } else { -1 };

    let rho_theta_apply = |u: &Vector, v: &Vector, x: &Vector| -> Vector {
        let (tu_, tv_) = (t.apply(u), t.apply(v));
        let mut out = ctx.g.bracket(&tu_, &tv_, x);
        let mut inner = ctx.rho.apply(&tv_, x, u);
        inner.add_assign(&ctx.rho.apply(x, &tu_, v));
        inner.add_assign(&ctx.theta.eval(x, &tu_, &tv_));
        out = out.sub(&t.apply(&inner));
        out
    };
    let induced = |u: &Vector, v: &Vector, w: &Vector| -> Vector {
        let (a, b, c) = (t.apply(u), t.apply(v), t.apply(w));
        let mut out = ctx.rho.apply(&a, &b, w);
        out.add_assign(&ctx.rho.apply(&b, &c, u));
        out.add_assign(&ctx.rho.apply(&c, &a, v));
        out.add_assign(&ctx.theta.eval(&a, &b, &c));
        out
    };

    let mut columns: Vec<Vec<Rational>> = Vec::new();
    for pos in 0..space.index_count() {
        for coord in 0..gd {
            let f = |args: &[MixArg]| unit_eval(space, pos, coord, args);
            let mut column: Vec<Rational> = Vec::with_capacity(out_space.coeff_dim());
            for key in out_space.keys() {
                let a = key.args();
                let m = a.len();
                let mut value = Vector::zero(gd);
                let signed = |s: i64, v: Vector| if s == 1 { v } else { v.neg() };

                let mut idx: Vec<MixArg> = a[..m - 3].iter().map(|&i| MixArg::Basis(i)).collect();
                idx.push(MixArg::Basis(a[m - 2]));
                value.add_assign(&signed(
                    sign_np1,
                    rho_theta_apply(&units[a[m - 1]], &units[a[m - 3]], &f(&idx)),
                ));

                let idx: Vec<MixArg> = a[..m - 2].iter().map(|&i| MixArg::Basis(i)).collect();
                value.add_assign(&signed(
                    sign_np1,
                    rho_theta_apply(&units[a[m - 2]], &units[a[m - 1]], &f(&idx)),
                ));

                for k in 1..=n {
                    let sign_k: i64 = if k % 2 == 0 { 1 } else { -1 };
                    let omit = [2 * k - 2, 2 * k - 1];
                    let idx: Vec<MixArg> = (0..m)
                        .filter(|p| !omit.contains(p))
                        .map(|p| MixArg::Basis(a[p]))
                        .collect();
                    value.add_assign(&signed(
                        -sign_k,
                        rho_theta_apply(&units[a[omit[0]]], &units[a[omit[1]]], &f(&idx)),
                    ));

                    for jj in (2 * k)..m {
                        let repl = induced(&units[a[omit[0]]], &units[a[omit[1]]], &units[a[jj]]);
                        let args: Vec<MixArg> = (0..m)
                            .filter(|p| !omit.contains(p))
                            .map(|p| {
                                if p == jj {
                                    MixArg::Vec(&repl)
                                } else {
                                    MixArg::Basis(a[p])
                                }
                            })
                            .collect();
                        value.add_assign(&signed(sign_k, f(&args)));
                    }
                }
                column.extend(value.entries().to_vec());
            }
            columns.push(column);
        }
    }
    // Transpose to row-major.
    let nrows = out_space.coeff_dim();
    (0..nrows)
        .map(|r| columns.iter().map(|c| c[r].clone()).collect())
        .collect()
}

/// Brute-force degree-0 differential matrix (columns over wedge pairs).
pub fn oracle_delta_matrix(op: &TwistedOperator) -> Vec<Vec<Rational>> {
    let ctx = op.context();
    let t = op.map();
    let (vd, gd) = (op.v_dim(), op.g_dim());
    let g_units: Vec<Vector> = (0..gd).map(|i| Vector::unit(gd, i)).collect();
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    for [i, j] in pairs(gd) {
        let mut column = Vec::with_capacity(vd * gd);
        for u in 0..vd {
            let v = Vector::unit(vd, u);
            let tv = t.apply(&v);
            let mut inner = ctx.rho.apply(&g_units[i], &g_units[j], &v);
            inner.add_assign(&ctx.theta.eval(&g_units[i], &g_units[j], &tv));
            let mut value = t.apply(&inner);
            value = value.sub(&ctx.g.bracket(&g_units[i], &g_units[j], &tv));
            column.extend(value.entries().to_vec());
        }
        columns.push(column);
    }
    let nrows = vd * gd;
    (0..nrows)
        .map(|r| columns.iter().map(|c| c[r].clone()).collect())
        .collect()
}

/// Brute-force cohomology dimensions: naive matrices plus Bareiss ranks.
pub fn oracle_cohomology_dims(op: &TwistedOperator, n: usize) -> (usize, usize, usize) {
    let (vd, gd) = (op.v_dim(), op.g_dim());
    let dim_at = |m: usize| -> usize {
        if m == 0 {
            pair_count(gd)
        } else {
            let c = CochainSpace::new(m, vd, gd);
            c.coeff_dim()
        }
    };
    let matrix_at = |m: usize| -> Vec<Vec<Rational>> {
        if m == 0 {
            oracle_delta_matrix(op)
        } else {
            oracle_diff_matrix(op, m)
        }
    };
    let d_n = matrix_at(n);
    let rank_n = oracle_rank(&d_n);
    let z = dim_at(n) - rank_n;
    let b = if n == 0 { 0 } else { oracle_rank(&matrix_at(n - 1)) };
    (z, b, z - b)
}
