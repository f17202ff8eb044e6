//! Render core objects back into fixture documents.

use trilie_core::nslie::ThreeNSLieAlgebra;
use trilie_core::structures::{Representation3, ThreeLieAlgebra, TwoCocycle3};
use trilie_core::twistop::TwistedOperator;

use crate::format::{render_matrix, render_vector, ObjectDoc, Rep3Entry, SparseEntry};


pub fn three_lie_doc(name: &str, g: &ThreeLieAlgebra) -> ObjectDoc {
    ObjectDoc::ThreeLie {
        name: name.to_string(),
        dim: g.dim(),
        brackets: g
            .table()
            .iter()
            .map(|(k, v)| SparseEntry { args: k.to_vec(), value: render_vector(v) })
            .collect(),
    }
}


pub fn rep3_doc(name: &str, algebra: &str, rep: &Representation3) -> ObjectDoc {
    ObjectDoc::Rep3 {
        name: name.to_string(),
        algebra: algebra.to_string(),
        space_dim: rep.space_dim(),
        entries: rep
            .table()
            .iter()
            .map(|(k, m)| Rep3Entry { args: k.to_vec(), matrix: render_matrix(m) })
            .collect(),
    }
}


pub fn cocycle3_doc(name: &str, algebra: &str, rep: &str, c: &TwoCocycle3) -> ObjectDoc {
    ObjectDoc::Cocycle3 {
        name: name.to_string(),
        algebra: algebra.to_string(),
        rep: rep.to_string(),
        values: c
            .table()
            .iter()
            .map(|(k, v)| SparseEntry { args: k.to_vec(), value: render_vector(v) })
            .collect(),
    }
}



pub fn three_ns_doc(name: &str, a: &ThreeNSLieAlgebra) -> ObjectDoc {
    ObjectDoc::ThreeNs {
        name: name.to_string(),
        dim: a.dim(),
        curly: a
            .curly_table()
            .iter()
            .map(|(k, v)| SparseEntry { args: k.to_vec(), value: render_vector(v) })
            .collect(),
        bracket2: a
            .bracket2_table()
            .iter()
            .map(|(k, v)| SparseEntry { args: k.to_vec(), value: render_vector(v) })
            .collect(),
    }
}


/// A twisted operator is written as a self-contained group of four objects:
/// algebra, representation, cocycle, then the operator referencing them.
pub fn twisted_op_docs(prefix: &str, op: &TwistedOperator) -> Vec<ObjectDoc> {
    let ctx = op.context();
    let alg_name = format!("{prefix}_algebra");
    let rep_name = format!("{prefix}_rep");
    let coc_name = format!("{prefix}_cocycle");
    vec![
        three_lie_doc(&alg_name, &ctx.g),
        rep3_doc(&rep_name, &alg_name, &ctx.rho),
        cocycle3_doc(&coc_name, &alg_name, &rep_name, &ctx.theta),
        ObjectDoc::TwistedOp {
            name: format!("{prefix}_op"),
            algebra: alg_name,
            rep: rep_name,
            cocycle: coc_name,
            matrix: render_matrix(op.map().matrix()),
        },
    ]
}
