//! Command dispatch: resolve references, run the requested operation, and
//! collect a machine-readable outcome.

use serde::Serialize;

use trilie_core::cohomology::{Cochain, CochainKey, TwistedComplex, ZeroCochain};
use trilie_core::deform::{equivalence_check_formal, formal_check, EquivalencePair};
use trilie_core::exactla::parse_rational;
use trilie_core::induce::{
    check_trace_lie, check_trace_ns, check_twisted_lie, diagram_check, induce_3lie, induce_3ns,
    induce_cocycle, induce_rep, induced_twisted,
};
use trilie_core::nslie::{
    check_3ns, check_ns_binary, compatible_from_invertible, from_nijenhuis_ns, from_twisted_ns,
};
use trilie_core::report::{Outcome, Report, Stats, Violation};
use trilie_core::structures::{
    check_cocycle3, check_cocycle_lie, check_filippov, check_jacobi, check_rep3, check_rep_lie,
    semidirect_twisted,
};
use trilie_core::twistop::{
    check_twisted, coboundary_shift, gauge_transform, nijenhuis_check, nijenhuis_package,
};

use crate::error::{CliError, Result};
use crate::export;
use crate::format::ObjectDoc;
use crate::workspace::{Object, Workspace};

/// Everything a command produces: an outcome, the detailed report when the
/// command is a check, structured extras, and any constructed objects.
#[derive(Serialize)]
pub struct CommandOutput {
    pub command: String,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<OrderJson>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub objects_written: Vec<String>,
    #[serde(skip)]
    pub docs: Vec<ObjectDoc>,
}

#[derive(Serialize)]
pub struct CohomologyJson {
    pub degree: usize,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub dim_cohomology: usize,
    pub representatives: Vec<Vec<RepresentativeEntry>>,
}

#[derive(Serialize)]
pub struct RepresentativeEntry {
    pub key: String,
    pub value: Vec<String>,
}

#[derive(Serialize)]
pub struct OrderJson {
    pub order: usize,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<Violation>,
}

impl CommandOutput {
    fn from_report(command: &str, report: Report) -> CommandOutput {
        CommandOutput {
            command: command.to_string(),
            outcome: report.outcome,
            report: Some(report),
            cohomology: None,
            orders: None,
            objects_written: Vec::new(),
            docs: Vec::new(),
        }
    }

    fn from_docs(command: &str, docs: Vec<ObjectDoc>) -> CommandOutput {
        CommandOutput {
            command: command.to_string(),
            outcome: Outcome::Pass,
            report: None,
            cohomology: None,
            orders: None,
            objects_written: docs.iter().map(|d| d.name().to_string()).collect(),
            docs,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Error => 2,
        }
    }
}

fn merge_reports(subject: &str, reports: Vec<Report>) -> Report {
    let mut details = Vec::new();
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

pub fn verify(ws: &Workspace, kind: &str, name: &str, algebra: Option<&str>) -> Result<CommandOutput> {
    let command = format!("verify {kind} {name}");
    let report = match kind {
        "lie" => check_jacobi(ws.lie(name)?),
        "3lie" => check_filippov(ws.three_lie(name)?),
        "rep_lie" => {
            let (alg, rep) = ws.rep_lie(name)?;
            check_rep_lie(ws.lie(alg)?, rep)
        }
        "rep3" => {
            let (alg, rep) = ws.rep3(name)?;
            check_rep3(ws.three_lie(alg)?, rep)
        }
        "cocycle_lie" => {
            let (alg, rep, cocycle) = ws.cocycle_lie(name)?;
            let (_, rep_obj) = ws.rep_lie(rep)?;
            check_cocycle_lie(ws.lie(alg)?, rep_obj, cocycle)
        }
        "cocycle3" => {
            let (alg, rep, cocycle) = ws.cocycle3(name)?;
            let (_, rep_obj) = ws.rep3(rep)?;
            check_cocycle3(ws.three_lie(alg)?, rep_obj, cocycle)
        }
        "twisted" => {
            let op = ws.twisted_op(name)?;
            let ctx = op.context();
            merge_reports(
                "twisted",
                vec![
                    check_filippov(&ctx.g),
                    check_rep3(&ctx.g, &ctx.rho),
                    check_cocycle3(&ctx.g, &ctx.rho, &ctx.theta),
                    check_twisted(op),
                ],
            )
        }
        "twisted_lie" => check_twisted_lie(ws.twisted_op_lie(name)?),
        "3ns" => check_3ns(ws.three_ns(name)?),
        "ns" => check_ns_binary(ws.ns(name)?),
        "trace" => {
            let (alg, tau) = ws.trace(name)?;
            match ws.get(alg)? {
                Object::Lie(g) => check_trace_lie(g, tau),
                Object::Ns(a) => check_trace_ns(a, tau),
                other => {
                    return Err(CliError::UnresolvedReference(format!(
                        "trace {name:?} references {alg:?} of kind {}, expected lie or ns",
                        other.kind()
                    )))
                }
            }
        }
        "nijenhuis" => {
            let alg = algebra.ok_or_else(|| {
                CliError::Usage("verify nijenhuis needs --algebra <3lie-name>".into())
            })?;
            nijenhuis_check(ws.three_lie(alg)?, ws.linmap(name)?)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown verify kind {other:?}; expected one of lie, 3lie, rep_lie, rep3, \
                 cocycle_lie, cocycle3, twisted, twisted_lie, 3ns, ns, trace, nijenhuis"
            )))
        }
    };
    Ok(CommandOutput::from_report(&command, report))
}

pub fn construct_semidirect(
    ws: &Workspace,
    algebra: &str,
    rep: &str,
    cocycle: &str,
    name: &str,
) -> Result<CommandOutput> {
    let g = ws.three_lie(algebra)?;
    let (_, rho) = ws.rep3(rep)?;
    let (_, _, theta) = ws.cocycle3(cocycle)?;
    let out = semidirect_twisted(g, rho, theta)?;
    Ok(CommandOutput::from_docs(
        "construct semidirect",
        vec![export::three_lie_doc(name, &out)],
    ))
}

pub fn construct_nijenhuis(ws: &Workspace, algebra: &str, map: &str, name: &str) -> Result<CommandOutput> {
    let g = ws.three_lie(algebra)?;
    let n = ws.linmap(map)?;
    let pkg = nijenhuis_package(g, n)?;
    Ok(CommandOutput::from_docs(
        "construct nijenhuis",
        export::twisted_op_docs(name, &pkg.op),
    ))
}

pub fn construct_gauge(ws: &Workspace, op: &str, cocycle1: &str, name: &str) -> Result<CommandOutput> {
    let out = gauge_transform(ws.twisted_op(op)?, ws.linmap(cocycle1)?)?;
    Ok(CommandOutput::from_docs("construct gauge", export::twisted_op_docs(name, &out)))
}

pub fn construct_shift(ws: &Workspace, op: &str, cochain: &str, name: &str) -> Result<CommandOutput> {
    let out = coboundary_shift(ws.twisted_op(op)?, ws.linmap(cochain)?)?;
    Ok(CommandOutput::from_docs("construct shift", export::twisted_op_docs(name, &out)))
}

pub fn construct_derive_ns(
    ws: &Workspace,
    op: Option<&str>,
    compatible: bool,
    algebra: Option<&str>,
    map: Option<&str>,
    name: &str,
) -> Result<CommandOutput> {
    let a = match (op, algebra, map) {
        (Some(op), None, None) => {
            let op = ws.twisted_op(op)?;
            if compatible {
                compatible_from_invertible(op)?
            } else {
                from_twisted_ns(op)?
            }
        }
        (None, Some(algebra), Some(map)) => from_nijenhuis_ns(ws.three_lie(algebra)?, ws.linmap(map)?)?,
        _ => {
            return Err(CliError::Usage(
                "derive-ns needs either --op <twisted_op> or --algebra <3lie> --map <linmap>".into(),
            ))
        }
    };
    Ok(CommandOutput::from_docs("construct derive-ns", vec![export::three_ns_doc(name, &a)]))
}

#[allow(clippy::too_many_arguments)]
pub fn construct_induce(
    ws: &Workspace,
    what: &str,
    trace: Option<&str>,
    algebra: Option<&str>,
    rep: Option<&str>,
    cocycle: Option<&str>,
    op: Option<&str>,
    ns: Option<&str>,
    name: &str,
) -> Result<CommandOutput> {
    let command = format!("construct induce --what {what}");
    let need_trace = || -> Result<&trilie_core::induce::TraceMap> {
        let t = trace.ok_or_else(|| CliError::Usage("induce needs --trace <name>".into()))?;
        Ok(ws.trace(t)?.1)
    };
    let need = |opt: Option<&str>, flag: &str| -> Result<String> {
        opt.map(str::to_string)
            .ok_or_else(|| CliError::Usage(format!("induce --what {what} needs --{flag} <name>")))
    };
    match what {
        "3lie" => {
            let alg = need(algebra, "algebra")?;
            let out = induce_3lie(ws.lie(&alg)?, need_trace()?)?;
            Ok(CommandOutput::from_docs(&command, vec![export::three_lie_doc(name, &out)]))
        }
        "rep" => {
            let alg = need(algebra, "algebra")?;
            let rep_name = need(rep, "rep")?;
            let g = ws.lie(&alg)?;
            let (_, rho) = ws.rep_lie(&rep_name)?;
            let tau = need_trace()?;
            let out_alg = induce_3lie(g, tau)?;
            let out_rep = induce_rep(g, rho, tau)?;
            let alg_doc_name = format!("{name}_algebra");
            Ok(CommandOutput::from_docs(
                &command,
                vec![
                    export::three_lie_doc(&alg_doc_name, &out_alg),
                    export::rep3_doc(name, &alg_doc_name, &out_rep),
                ],
            ))
        }
        "cocycle" => {
            let alg = need(algebra, "algebra")?;
            let rep_name = need(rep, "rep")?;
            let coc_name = need(cocycle, "cocycle")?;
            let g = ws.lie(&alg)?;
            let (_, rho) = ws.rep_lie(&rep_name)?;
            let (_, _, theta) = ws.cocycle_lie(&coc_name)?;
            let tau = need_trace()?;
            let out_alg = induce_3lie(g, tau)?;
            let out_rep = induce_rep(g, rho, tau)?;
            let out_coc = induce_cocycle(g, rho, theta, tau)?;
            let alg_doc = format!("{name}_algebra");
            let rep_doc = format!("{name}_rep");
            Ok(CommandOutput::from_docs(
                &command,
                vec![
                    export::three_lie_doc(&alg_doc, &out_alg),
                    export::rep3_doc(&rep_doc, &alg_doc, &out_rep),
                    export::cocycle3_doc(name, &alg_doc, &rep_doc, &out_coc),
                ],
            ))
        }
        "twisted" => {
            let op_name = need(op, "op")?;
            let out = induced_twisted(ws.twisted_op_lie(&op_name)?, need_trace()?)?;
            Ok(CommandOutput::from_docs(&command, export::twisted_op_docs(name, &out)))
        }
        "3ns" => {
            let ns_name = need(ns, "ns")?;
            let out = induce_3ns(ws.ns(&ns_name)?, need_trace()?)?;
            Ok(CommandOutput::from_docs(&command, vec![export::three_ns_doc(name, &out)]))
        }
        "diagram" => {
            let op_name = need(op, "op")?;
            let report = diagram_check(ws.twisted_op_lie(&op_name)?, need_trace()?)?;
            Ok(CommandOutput::from_report(&command, report))
        }
        other => Err(CliError::Usage(format!(
            "unknown induce target {other:?}; expected 3lie, rep, cocycle, twisted, 3ns or diagram"
        ))),
    }
}

pub fn cohomology(ws: &Workspace, op_name: &str, degree: usize, cap: usize) -> Result<CommandOutput> {
    let op = ws.twisted_op(op_name)?;
    op.validate()?;
    let complex = TwistedComplex::new(op)?;
    let dims = complex.cohomology_dims(degree, cap)?;

    let representatives: Vec<Vec<RepresentativeEntry>> = dims
        .representatives
        .iter()
        .map(|coeffs| {
            if degree == 0 {
                trilie_core::multiindex::pairs(op.g_dim())
                    .into_iter()
                    .zip(coeffs.entries())
                    .filter(|(_, c)| !<_ as num_traits::Zero>::is_zero(*c))
                    .map(|(p, c)| RepresentativeEntry {
                        key: format!("e{}^e{}", p[0], p[1]),
                        value: vec![trilie_core::exactla::rational_to_string(c)],
                    })
                    .collect()
            } else {
                let space = complex.space(degree);
                let cochain = Cochain::from_coeff_vector(space, coeffs).expect("shape is canonical");
                space
                    .keys()
                    .into_iter()
                    .filter_map(|key: CochainKey| {
                        let v = cochain.entry(&key);
                        if v.is_zero() {
                            None
                        } else {
                            Some(RepresentativeEntry { key: key.label(), value: v.to_strings() })
                        }
                    })
                    .collect()
            }
        })
        .collect();

    Ok(CommandOutput {
        command: format!("cohomology --op {op_name} --degree {degree}"),
        outcome: Outcome::Pass,
        report: None,
        cohomology: Some(CohomologyJson {
            degree,
            dim_cocycles: dims.dim_cocycles,
            dim_coboundaries: dims.dim_coboundaries,
            dim_cohomology: dims.dim_cohomology,
            representatives,
        }),
        orders: None,
        objects_written: Vec::new(),
        docs: Vec::new(),
    })
}

pub fn deform_check(ws: &Workspace, family: &str) -> Result<CommandOutput> {
    let fam = ws.family(family)?;
    fam.base().validate()?;
    let result = formal_check(fam)?;
    let orders: Vec<OrderJson> = result
        .orders
        .iter()
        .enumerate()
        .map(|(s, r)| OrderJson {
            order: s,
            outcome: r.outcome,
            first_violation: r.first_violation().cloned(),
        })
        .collect();
    Ok(CommandOutput {
        command: format!("deform check --family {family}"),
        outcome: result.overall.outcome,
        report: Some(result.overall),
        cohomology: None,
        orders: Some(orders),
        objects_written: Vec::new(),
        docs: Vec::new(),
    })
}

/// Wedge argument syntax: a JSON array of `{"args": [i, j], "value": "p/q"}`.
fn parse_wedge(dim: usize, text: &str) -> Result<ZeroCochain> {
    #[derive(serde::Deserialize)]
    struct WedgeEntry {
        args: Vec<usize>,
        value: String,
    }
    let entries: Vec<WedgeEntry> =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("--wedge: {e}")))?;
    let mut x = ZeroCochain::zero(dim);
    for e in &entries {
        if e.args.len() != 2 || e.args[0] >= e.args[1] || e.args[1] >= dim {
            return Err(CliError::Parse(format!(
                "--wedge: args {:?} must be a strictly increasing pair below {dim}",
                e.args
            )));
        }
        let c = parse_rational(&e.value).map_err(|err| CliError::Parse(format!("--wedge: {err}")))?;
        x = x.add(&ZeroCochain::single(dim, e.args[0], e.args[1]).scale(&c));
    }
    Ok(x)
}

#[allow(clippy::too_many_arguments)]
pub fn deform_equiv(
    ws: &Workspace,
    family: &str,
    family2: &str,
    wedge: &str,
    phi: &[String],
    psi: &[String],
    truncation: Option<usize>,
) -> Result<CommandOutput> {
    let fam = ws.family(family)?;
    let fam2 = ws.family(family2)?;
    fam.base().validate()?;
    let x = parse_wedge(fam.base().g_dim(), wedge)?;
    let higher_phi = phi.iter().map(|n| ws.linmap(n).cloned()).collect::<Result<Vec<_>>>()?;
    let higher_psi = psi.iter().map(|n| ws.linmap(n).cloned()).collect::<Result<Vec<_>>>()?;
    let pair = EquivalencePair { x, higher_phi, higher_psi };
    let truncation = truncation.unwrap_or_else(|| fam.max_order().max(fam2.max_order()));
    let report = equivalence_check_formal(fam, fam2, &pair, truncation)?;
    Ok(CommandOutput::from_report(
        &format!("deform equiv --family {family} --family2 {family2}"),
        report,
    ))
}
