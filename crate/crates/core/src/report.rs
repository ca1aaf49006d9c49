//! One-shot classification of a polyhedron, as used by `classify` and the
//! JSON export.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::moves;
use crate::quotient::{self, HomologyResult, Singularity};
use crate::scheme::{EdgeClass, Polyhedron, VertexClass};

pub const SCHEMA_VERSION: u32 = 1;

#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub V: usize,
    pub E: usize,
    pub F: usize,
    pub V_q: usize,
    pub E_q: usize,
    pub F_q: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub schema_version: u32,
    pub name: String,
    pub counts: Counts,
    pub chi_quotient: i64,
    pub chi_scar: i64,
    pub edge_cycles: Vec<usize>,
    pub vertex_orders: Vec<usize>,
    pub manifold: bool,
    pub singularities: Vec<Singularity>,
    pub homology: HomologyResult,
    pub simple: bool,
    pub cellular: bool,
    pub special: bool,
    pub distinguished: bool,
    pub minimize_outcome: String,
    pub diagnostics: Vec<String>,
}

/// Aggregates the manifold test, homology and every scar predicate.
/// `distinguished` refers to the standard form of the input.
pub fn classify(p: &Polyhedron) -> Result<Classification> {
    let ball = p.ball();
    let summary = quotient::summarize(p)?;
    let (v_q, e_q, f_q) = summary.scar.counts();
    let cellular = quotient::is_cellular(p)?;
    let special = quotient::is_special(p)?;
    let distinguished = moves::is_distinguished(&p.standard_form())?;
    let outcome = moves::minimize(p).outcome;
    Ok(Classification {
        schema_version: SCHEMA_VERSION,
        name: p.name().to_string(),
        counts: Counts {
            V: ball.vertex_count(),
            E: ball.label_count(),
            F: ball.face_count(),
            V_q: v_q,
            E_q: e_q,
            F_q: f_q,
        },
        chi_quotient: quotient::chi_quotient(p),
        chi_scar: summary.scar.euler_characteristic(),
        edge_cycles: summary.scar.edge_cells.iter().map(EdgeClass::cycle).collect(),
        vertex_orders: summary.scar.vertex_cells.iter().map(VertexClass::order).collect(),
        manifold: summary.manifold.manifold,
        singularities: summary.manifold.singularities,
        homology: summary.homology,
        simple: summary.simple,
        cellular: cellular.cellular,
        special,
        distinguished,
        minimize_outcome: outcome.kind().to_string(),
        diagnostics: cellular.diagnostic.into_iter().collect(),
    })
}

impl Classification {
    pub fn to_text(&self) -> String {
        let c = &self.counts;
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("name: {}", self.name));
        line(format!(
            "ball: V={} E={} F={}; scar: V_q={} E_q={} F_q={}",
            c.V, c.E, c.F, c.V_q, c.E_q, c.F_q
        ));
        line(format!("chi_quotient: {}  chi_scar: {}", self.chi_quotient, self.chi_scar));
        line(format!("edge cycles: {:?}", self.edge_cycles));
        line(format!("vertex orders: {:?}", self.vertex_orders));
        let mut m = format!("manifold: {}", self.manifold);
        for s in &self.singularities {
            write!(m, " [vertex class {} has link genus {}]", s.vertex_class, s.genus).expect("string");
        }
        line(m);
        line(format!("homology: {}", self.homology));
        line(format!(
            "simple: {}  cellular: {}  special: {}  distinguished: {}",
            self.simple, self.cellular, self.special, self.distinguished
        ));
        line(format!("minimize: {}", self.minimize_outcome));
        for d in &self.diagnostics {
            line(format!("note: {d}"));
        }
        out
    }
}
