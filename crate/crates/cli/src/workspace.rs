//! Workspace loading: parse fixture files, validate shapes, and resolve
//! every cross-reference before any command runs.

use std::collections::BTreeMap;
use std::path::Path;

use trilie_core::deform::DeformationFamily;
use trilie_core::exactla::parse_rational;
use trilie_core::induce::{TraceMap, TwistedOperatorLie};
use trilie_core::nslie::{NSLieAlgebra, ThreeNSLieAlgebra};
use trilie_core::structures::{
    LieAlgebra, LinearMap, Representation3, RepresentationLie, ThreeLieAlgebra, TwoCocycle3,
    TwoCocycleLie,
};
use trilie_core::twistop::{TwistedContext, TwistedOperator};

use crate::error::{CliError, Result};
use crate::format::{
    check_increasing, parse_document, parse_matrix, parse_value, Document, ObjectDoc,
};

/// A fully resolved named object.
#[derive(Debug, Clone)]
pub enum Object {
    Lie(LieAlgebra),
    ThreeLie(ThreeLieAlgebra),
    RepLie { algebra: String, rep: RepresentationLie },
    Rep3 { algebra: String, rep: Representation3 },
    CocycleLie { algebra: String, rep: String, cocycle: TwoCocycleLie },
    Cocycle3 { algebra: String, rep: String, cocycle: TwoCocycle3 },
    Linmap(LinearMap),
    Trace { algebra: String, map: TraceMap },
    TwistedOp(TwistedOperator),
    TwistedOpLie(TwistedOperatorLie),
    ThreeNs(ThreeNSLieAlgebra),
    Ns(NSLieAlgebra),
    Family(DeformationFamily),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Lie(_) => "lie",
            Object::ThreeLie(_) => "3lie",
            Object::RepLie { .. } => "rep_lie",
            Object::Rep3 { .. } => "rep3",
            Object::CocycleLie { .. } => "cocycle_lie",
            Object::Cocycle3 { .. } => "cocycle3",
            Object::Linmap(_) => "linmap",
            Object::Trace { .. } => "trace",
            Object::TwistedOp(_) => "twisted_op",
            Object::TwistedOpLie(_) => "twisted_op_lie",
            Object::ThreeNs(_) => "3ns",
            Object::Ns(_) => "ns",
            Object::Family(_) => "deformation_family",
        }
    }
}

/// Named, fully cross-resolved objects plus the raw documents they came
/// from (kept for serialization round-trips).
pub struct Workspace {
    pub docs: Vec<Document>,
    objects: BTreeMap<String, Object>,
}

impl Workspace {
    pub fn parse_files(paths: &[impl AsRef<Path>]) -> Result<Workspace> {
        let mut docs = Vec::new();
        for p in paths {
            let p = p.as_ref();
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            docs.push(parse_document(&text, &p.display().to_string())?);
        }
        Workspace::from_documents(docs)
    }

    pub fn from_documents(docs: Vec<Document>) -> Result<Workspace> {
        let mut ws = Workspace { docs, objects: BTreeMap::new() };
        // Two passes: primitive objects first, then everything that
        // references them. Forward references within a pass group resolve
        // because the groups are ordered by dependency depth.
        let all: Vec<ObjectDoc> = ws.docs.iter().flat_map(|d| d.objects.clone()).collect();
        let depth = |o: &ObjectDoc| -> u8 {
            match o {
                ObjectDoc::Lie { .. } | ObjectDoc::ThreeLie { .. } | ObjectDoc::Linmap { .. }
                | ObjectDoc::ThreeNs { .. } | ObjectDoc::Ns { .. } => 0,
                ObjectDoc::RepLie { .. } | ObjectDoc::Rep3 { .. } | ObjectDoc::Trace { .. } => 1,
                ObjectDoc::CocycleLie { .. } | ObjectDoc::Cocycle3 { .. } => 2,
                ObjectDoc::TwistedOp { .. } | ObjectDoc::TwistedOpLie { .. } => 3,
                ObjectDoc::DeformationFamily { .. } => 4,
            }
        };
        let mut ordered = all;
        ordered.sort_by_key(depth);
        for doc in &ordered {
            let name = doc.name().to_string();
            if ws.objects.contains_key(&name) {
                return Err(CliError::Parse(format!("duplicate object name {name:?}")));
            }
            let object = ws.resolve_object(doc)?;
            ws.objects.insert(name, object);
        }
        Ok(ws)
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.objects.keys()
    }

    pub fn get(&self, name: &str) -> Result<&Object> {
        self.objects.get(name).ok_or_else(|| {
            CliError::UnresolvedReference(format!("no object named {name:?} in the workspace"))
        })
    }

    pub fn lie(&self, name: &str) -> Result<&LieAlgebra> {
        match self.get(name)? {
            Object::Lie(g) => Ok(g),
            other => Err(CliError::UnresolvedReference(format!(
                "{name:?} is a {}, expected a Lie algebra",
                other.kind()
            ))),
        }
    }

    pub fn three_lie(&self, name: &str) -> Result<&ThreeLieAlgebra> {
        match self.get(name)? {
            Object::ThreeLie(g) => Ok(g),
            other => Err(CliError::UnresolvedReference(format!(
                "{name:?} is a {}, expected a 3-Lie algebra",
                other.kind()
            ))),
        }
    }

    pub fn rep3(&self, name: &str) -> Result<(&String, &Representation3)> {
        match self.get(name)? {
            Object::Rep3 { algebra, rep } => Ok((algebra, rep)),
            other => Err(CliError::UnresolvedReference(format!(
                "{name:?} is a {}, expected a ternary representation",
                other.kind()
            ))),
        }
    }

    pub fn rep_lie(&self, name: &str) -> Result<(&String, &RepresentationLie)> {
        match self.get(name)? {
            Object::RepLie { algebra, rep } => Ok((algebra, rep)),
            other => Err(CliError::UnresolvedReference(format!(
                "{name:?} is a {}, expected a Lie representation",
                other.kind()
            ))),
        }
    }

    pub fn cocycle3(&self, name: &str) -> Result<(&String, &String, &TwoCocycle3)> {
        match self.get(name)? {
            Object::Cocycle3 { algebra, rep, cocycle } => Ok((algebra, rep, cocycle)),
            other => Err(CliError::UnresolvedReference(format!(
                "{name:?} is a {}, expected a ternary cocycle",
                other.kind()
            ))),
        }
    }

    pub fn cocycle_lie(&self, name: &str) -> Result<(&String, &String, &TwoCocycleLie)> {
        match self.get(name)? {
            Object::CocycleLie { algebra, rep, cocycle } => Ok((algebra, rep, cocycle)),
            other => Err(CliError::UnresolvedReference(format!(
                "{name:?} is a {}, expected a binary cocycle",
                other.kind()
            ))),
        }
    }

    pub fn linmap(&self, name: &str) -> Result<&LinearMap> {
        match self.get(name)? {
            Object::Linmap(m) => Ok(m),
            other => Err(CliError::UnresolvedReference(format!(
                "{name:?} is a {}, expected a linear map",
                other.kind()
            ))),
        }
    }

    pub fn trace(&self, name: &str) -> Result<(&String, &TraceMap)> {
        match self.get(name)? {
            Object::Trace { algebra, map } => Ok((algebra, map)),
            other => Err(CliError::UnresolvedReference(format!(
                "{name:?} is a {}, expected a trace form",
                other.kind()
            ))),
        }
    }

    pub fn twisted_op(&self, name: &str) -> Result<&TwistedOperator> {
        match self.get(name)? {
            Object::TwistedOp(op) => Ok(op),
            other => Err(CliError::UnresolvedReference(format!(
                "{name:?} is a {}, expected a twisted operator",
                other.kind()
            ))),
        }
    }

    pub fn twisted_op_lie(&self, name: &str) -> Result<&TwistedOperatorLie> {
        match self.get(name)? {
            Object::TwistedOpLie(op) => Ok(op),
            other => Err(CliError::UnresolvedReference(format!(
                "{name:?} is a {}, expected a binary twisted operator",
                other.kind()
            ))),
        }
    }

    pub fn three_ns(&self, name: &str) -> Result<&ThreeNSLieAlgebra> {
        match self.get(name)? {
            Object::ThreeNs(a) => Ok(a),
            other => Err(CliError::UnresolvedReference(format!(
                "{name:?} is a {}, expected a ternary NS structure",
                other.kind()
            ))),
        }
    }

    pub fn ns(&self, name: &str) -> Result<&NSLieAlgebra> {
        match self.get(name)? {
            Object::Ns(a) => Ok(a),
            other => Err(CliError::UnresolvedReference(format!(
                "{name:?} is a {}, expected a binary NS structure",
                other.kind()
            ))),
        }
    }

    pub fn family(&self, name: &str) -> Result<&DeformationFamily> {
        match self.get(name)? {
            Object::Family(f) => Ok(f),
            other => Err(CliError::UnresolvedReference(format!(
                "{name:?} is a {}, expected a deformation family",
                other.kind()
            ))),
        }
    }

    /// Dimension of the algebra an object named `algebra` lives on, for
    /// shape checks during resolution (Lie or ternary).
    fn algebra_dim(&self, algebra: &str, what: &str) -> Result<usize> {
        match self.get(algebra) {
            Ok(Object::Lie(g)) => Ok(g.dim()),
            Ok(Object::ThreeLie(g)) => Ok(g.dim()),
            Ok(Object::Ns(a)) => Ok(a.dim()),
            Ok(other) => Err(CliError::UnresolvedReference(format!(
                "{what}: {algebra:?} is a {}, expected an algebra",
                other.kind()
            ))),
            Err(e) => Err(e),
        }
    }

    fn resolve_object(&self, doc: &ObjectDoc) -> Result<Object> {
        match doc {
            ObjectDoc::Lie { name, dim, brackets } => {
                let mut entries = Vec::new();
                for e in brackets {
                    check_increasing(&e.args, 2, *dim, &format!("{name}: bracket"))?;
                    entries.push(([e.args[0], e.args[1]], parse_value(&e.value, *dim, name)?));
                }
                Ok(Object::Lie(
                    LieAlgebra::new(*dim, entries).map_err(|e| CliError::Parse(format!("{name}: {e}")))?,
                ))
            }
            ObjectDoc::ThreeLie { name, dim, brackets } => {
                let mut entries = Vec::new();
                for e in brackets {
                    check_increasing(&e.args, 3, *dim, &format!("{name}: bracket"))?;
                    entries.push((
                        [e.args[0], e.args[1], e.args[2]],
                        parse_value(&e.value, *dim, name)?,
                    ));
                }
                Ok(Object::ThreeLie(
                    ThreeLieAlgebra::new(*dim, entries)
                        .map_err(|e| CliError::Parse(format!("{name}: {e}")))?,
                ))
            }
            ObjectDoc::RepLie { name, algebra, space_dim, entries } => {
                let dim = self.algebra_dim(algebra, name)?;
                let mut mats = vec![trilie_core::exactla::Mat::zero(*space_dim, *space_dim); dim];
                for e in entries {
                    if e.arg >= dim {
                        return Err(CliError::Parse(format!(
                            "{name}: index {} out of range for dimension {dim}",
                            e.arg
                        )));
                    }
                    mats[e.arg] = parse_matrix(&e.matrix, *space_dim, *space_dim, name)?;
                }
                let rep = RepresentationLie::new(dim, *space_dim, mats)
                    .map_err(|e| CliError::Parse(format!("{name}: {e}")))?;
                Ok(Object::RepLie { algebra: algebra.clone(), rep })
            }
            ObjectDoc::Rep3 { name, algebra, space_dim, entries } => {
                let dim = self.algebra_dim(algebra, name)?;
                let mut parsed = Vec::new();
                for e in entries {
                    check_increasing(&e.args, 2, dim, &format!("{name}: representation entry"))?;
                    parsed.push((
                        [e.args[0], e.args[1]],
                        parse_matrix(&e.matrix, *space_dim, *space_dim, name)?,
                    ));
                }
                let rep = Representation3::new(dim, *space_dim, parsed)
                    .map_err(|e| CliError::Parse(format!("{name}: {e}")))?;
                Ok(Object::Rep3 { algebra: algebra.clone(), rep })
            }
            ObjectDoc::CocycleLie { name, algebra, rep, values } => {
                let dim = self.algebra_dim(algebra, name)?;
                let (_, rep_obj) = self.rep_lie(rep)?;
                let space = rep_obj.space_dim();
                let mut entries = Vec::new();
                for e in values {
                    check_increasing(&e.args, 2, dim, &format!("{name}: cocycle value"))?;
                    entries.push(([e.args[0], e.args[1]], parse_value(&e.value, space, name)?));
                }
                let cocycle = TwoCocycleLie::new(dim, space, entries)
                    .map_err(|e| CliError::Parse(format!("{name}: {e}")))?;
                Ok(Object::CocycleLie { algebra: algebra.clone(), rep: rep.clone(), cocycle })
            }
            ObjectDoc::Cocycle3 { name, algebra, rep, values } => {
                let dim = self.algebra_dim(algebra, name)?;
                let (_, rep_obj) = self.rep3(rep)?;
                let space = rep_obj.space_dim();
                let mut entries = Vec::new();
                for e in values {
                    check_increasing(&e.args, 3, dim, &format!("{name}: cocycle value"))?;
                    entries.push((
                        [e.args[0], e.args[1], e.args[2]],
                        parse_value(&e.value, space, name)?,
                    ));
                }
                let cocycle = TwoCocycle3::new(dim, space, entries)
                    .map_err(|e| CliError::Parse(format!("{name}: {e}")))?;
                Ok(Object::Cocycle3 { algebra: algebra.clone(), rep: rep.clone(), cocycle })
            }
            ObjectDoc::Linmap { name, source_dim, target_dim, matrix } => Ok(Object::Linmap(
                LinearMap::new(parse_matrix(matrix, *target_dim, *source_dim, name)?),
            )),
            ObjectDoc::Trace { name, algebra, coeffs } => {
                let dim = self.algebra_dim(algebra, name)?;
                let mut parsed = Vec::with_capacity(coeffs.len());
                for s in coeffs {
                    parsed.push(
                        parse_rational(s).map_err(|e| CliError::Parse(format!("{name}: {e}")))?,
                    );
                }
                if parsed.len() != dim {
                    return Err(CliError::Parse(format!(
                        "{name}: trace form has {} coefficients, expected {dim}",
                        parsed.len()
                    )));
                }
                Ok(Object::Trace {
                    algebra: algebra.clone(),
                    map: TraceMap::new(trilie_core::exactla::Vector::new(parsed)),
                })
            }
            ObjectDoc::TwistedOp { name, algebra, rep, cocycle, matrix } => {
                let g = self.three_lie(algebra)?.clone();
                let (rep_alg, rep_obj) = self.rep3(rep)?;
                if rep_alg != algebra {
                    return Err(CliError::UnresolvedReference(format!(
                        "{name}: representation {rep:?} lives on {rep_alg:?}, not {algebra:?}"
                    )));
                }
                let (coc_alg, coc_rep, coc) = self.cocycle3(cocycle)?;
                if coc_alg != algebra || coc_rep != rep {
                    return Err(CliError::UnresolvedReference(format!(
                        "{name}: cocycle {cocycle:?} does not match the operator context"
                    )));
                }
                let t = parse_matrix(matrix, g.dim(), rep_obj.space_dim(), name)?;
                let ctx = TwistedContext::new(g, rep_obj.clone(), coc.clone())
                    .map_err(|e| CliError::Parse(format!("{name}: {e}")))?;
                Ok(Object::TwistedOp(
                    TwistedOperator::new(ctx, LinearMap::new(t))
                        .map_err(|e| CliError::Parse(format!("{name}: {e}")))?,
                ))
            }
            ObjectDoc::TwistedOpLie { name, algebra, rep, cocycle, matrix } => {
                let g = self.lie(algebra)?.clone();
                let (rep_alg, rep_obj) = self.rep_lie(rep)?;
                if rep_alg != algebra {
                    return Err(CliError::UnresolvedReference(format!(
                        "{name}: representation {rep:?} lives on {rep_alg:?}, not {algebra:?}"
                    )));
                }
                let (coc_alg, coc_rep, coc) = self.cocycle_lie(cocycle)?;
                if coc_alg != algebra || coc_rep != rep {
                    return Err(CliError::UnresolvedReference(format!(
                        "{name}: cocycle {cocycle:?} does not match the operator context"
                    )));
                }
                let t = parse_matrix(matrix, g.dim(), rep_obj.space_dim(), name)?;
                Ok(Object::TwistedOpLie(
                    TwistedOperatorLie::new(g, rep_obj.clone(), coc.clone(), LinearMap::new(t))
                        .map_err(|e| CliError::Parse(format!("{name}: {e}")))?,
                ))
            }
            ObjectDoc::ThreeNs { name, dim, curly, bracket2 } => {
                let mut curly_entries = Vec::new();
                for e in curly {
                    if e.args.len() != 3 {
                        return Err(CliError::Parse(format!(
                            "{name}: curly entry needs 3 indices, got {}",
                            e.args.len()
                        )));
                    }
                    // First two slots strictly increasing, third free.
                    check_increasing(&e.args[..2], 2, *dim, &format!("{name}: curly entry"))?;
                    if e.args[2] >= *dim {
                        return Err(CliError::Parse(format!(
                            "{name}: index {} out of range for dimension {dim}",
                            e.args[2]
                        )));
                    }
                    curly_entries.push((
                        [e.args[0], e.args[1], e.args[2]],
                        parse_value(&e.value, *dim, name)?,
                    ));
                }
                let mut skew_entries = Vec::new();
                for e in bracket2 {
                    check_increasing(&e.args, 3, *dim, &format!("{name}: bracket entry"))?;
                    skew_entries.push((
                        [e.args[0], e.args[1], e.args[2]],
                        parse_value(&e.value, *dim, name)?,
                    ));
                }
                Ok(Object::ThreeNs(
                    ThreeNSLieAlgebra::new(*dim, curly_entries, skew_entries)
                        .map_err(|e| CliError::Parse(format!("{name}: {e}")))?,
                ))
            }
            ObjectDoc::Ns { name, dim, curly, bracket2 } => {
                let mut curly_entries = Vec::new();
                for e in curly {
                    if e.args.len() != 2 || e.args.iter().any(|&i| i >= *dim) {
                        return Err(CliError::Parse(format!(
                            "{name}: curly entry indices {:?} invalid for dimension {dim}",
                            e.args
                        )));
                    }
                    curly_entries.push(([e.args[0], e.args[1]], parse_value(&e.value, *dim, name)?));
                }
                let mut skew_entries = Vec::new();
                for e in bracket2 {
                    check_increasing(&e.args, 2, *dim, &format!("{name}: bracket entry"))?;
                    skew_entries.push(([e.args[0], e.args[1]], parse_value(&e.value, *dim, name)?));
                }
                Ok(Object::Ns(
                    NSLieAlgebra::new(*dim, curly_entries, skew_entries)
                        .map_err(|e| CliError::Parse(format!("{name}: {e}")))?,
                ))
            }
            ObjectDoc::DeformationFamily { name, base, terms } => {
                let op = self.twisted_op(base)?.clone();
                let mut parsed = Vec::new();
                for (i, t) in terms.iter().enumerate() {
                    parsed.push(LinearMap::new(parse_matrix(
                        t,
                        op.g_dim(),
                        op.v_dim(),
                        &format!("{name}: term {}", i + 1),
                    )?));
                }
                Ok(Object::Family(
                    DeformationFamily::new(op, parsed)
                        .map_err(|e| CliError::Parse(format!("{name}: {e}")))?,
                ))
            }
        }
    }
}
