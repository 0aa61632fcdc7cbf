//! Serialization helpers and the text/JSON analysis report.

use crate::rational::{format_rational, Q};
use serde::Serializer;

pub fn ser_qvec<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

pub fn ser_opt_qvec<S: Serializer>(v: &Option<Vec<Q>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_qvec(v, s),
        None => s.serialize_none(),
    }
}

use crate::error::Result as CrateResult;
use crate::kinetics::PowerLawKinetics;
use crate::models::model_notes;
use crate::network::{
    concordance, is_conservative, is_positively_dependent, is_regular, linkage_class_independence, network_numbers,
    structural_flags, Concordance, NetworkNumbers, Regularity, StructuralFlags, Verdict,
};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Properties {
    /// `Err` text when the search was skipped (size limit).
    pub concordance: std::result::Result<Concordance, String>,
    pub conservative: Verdict,
    pub independent_linkage_classes: bool,
    pub positively_dependent: Verdict,
    pub regular: Regularity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub name: String,
    pub species: Vec<String>,
    pub numbers: NetworkNumbers,
    pub flags: StructuralFlags,
    pub properties: Properties,
    pub notes: Vec<String>,
}

pub fn analyze(kin: &PowerLawKinetics) -> CrateResult<AnalysisReport> {
    let net = kin.network();
    Ok(AnalysisReport {
        name: net.name().to_string(),
        species: net.species().to_vec(),
        numbers: network_numbers(net),
        flags: structural_flags(net),
        properties: Properties {
            concordance: concordance(net).map_err(|e| e.to_string()),
            conservative: is_conservative(net),
            independent_linkage_classes: linkage_class_independence(net),
            positively_dependent: is_positively_dependent(net),
            regular: is_regular(net),
        },
        notes: model_notes(net.name()).into_iter().map(String::from).collect(),
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "Yes"
    } else {
        "No"
    }
}

fn table(out: &mut String, rows: &[(String, String)]) {
    let w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    for (a, b) in rows {
        out.push_str(&format!("{a:<w$}  {b}\n"));
    }
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let n = &self.numbers;
        let mut out = format!("Network: {}\n\n", self.name);
        let num = |label: &str, sym: &str, v: String| (format!("{label:<32} {sym}"), v);
        let rows = vec![
            (format!("{:<32} {}", "Network number", "Symbol"), "Value".to_string()),
            num("Species", "m", n.m.to_string()),
            num("Complex", "n", n.n.to_string()),
            num("Reactant complexes", "n_r", n.n_r.to_string()),
            num("Reactions", "r", n.r.to_string()),
            num("Irreversible reactions", "r_irr", n.r_irr.to_string()),
            num("Linkage classes", "l", n.l.to_string()),
            num("Strong linkage classes", "sl", n.sl.to_string()),
            num("Terminal strong linkage classes", "t", n.t.to_string()),
            num("Rank", "s", n.s.to_string()),
            num("Reactant rank", "q", n.q.to_string()),
            num("Deficiency", "delta", n.delta.to_string()),
            num("Reactant deficiency", "delta_rho", n.delta_rho.to_string()),
        ];
        table(&mut out, &rows);
        out.push('\n');
        let p = &self.properties;
        let conc = match &p.concordance {
            Ok(Concordance::Concordant) => "Concordant".to_string(),
            Ok(Concordance::Discordant { .. }) => "Discordant".to_string(),
            Err(e) => format!("Not computed ({e})"),
        };
        let pd = if p.positively_dependent.holds { "Has positively dependent reaction vectors" } else { "No positively dependent reaction vectors" };
        let rows = vec![
            ("Property".to_string(), "Report".to_string()),
            ("Concordance".to_string(), conc),
            ("Conservative".to_string(), yes_no(p.conservative.holds).to_string()),
            ("Independent linkage classes".to_string(), yes_no(p.independent_linkage_classes).to_string()),
            ("Positive dependent".to_string(), pd.to_string()),
            ("Regular".to_string(), yes_no(p.regular.regular).to_string()),
            ("Weakly reversible".to_string(), yes_no(self.flags.weakly_reversible).to_string()),
            ("t-minimal".to_string(), yes_no(self.flags.t_minimal).to_string()),
            ("Cycle terminal".to_string(), yes_no(self.flags.cycle_terminal).to_string()),
            ("Point terminal".to_string(), yes_no(self.flags.point_terminal).to_string()),
        ];
        table(&mut out, &rows);
        if !self.notes.is_empty() {
            out.push_str("\nNotes\n");
            for (i, note) in self.notes.iter().enumerate() {
                out.push_str(&format!("  [{}] {note}\n", i + 1));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
