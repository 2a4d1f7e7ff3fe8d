//! JSON-serializable report types for the command-line front end. Numeric
//! values that may exceed machine integers (torsion orders, determinants)
//! are carried as decimal strings.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::fredholm::{GeneratorKind, StarReport};
use crate::graph::{EdgeFunction, VertexFunction};
use crate::lens::LensK1Report;
use crate::linalg::{
    format_combination, primary_decomposition, AbelianGroupPresentation, GroupElement, Order,
};

fn order_string(o: &Order) -> String {
    o.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorReport {
    pub label: String,
    pub expression: String,
    pub order: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub isomorphism_class: String,
    pub torsion: Vec<String>,
    pub rank: usize,
    /// Primary decompositions of the torsion orders, e.g. `"12 = 2^2 * 3"`.
    pub primary: Vec<String>,
    pub generators: Vec<GeneratorReport>,
}

impl GroupReport {
    pub fn from_presentation(gp: &AbelianGroupPresentation) -> Self {
        let primary = gp
            .torsion()
            .iter()
            .filter_map(|d| {
                let factors = primary_decomposition(d)?;
                if factors.len() <= 1 && factors.first().is_none_or(|&(_, e)| e == 1) {
                    return None;
                }
                let parts: Vec<String> = factors
                    .iter()
                    .map(|&(p, e)| {
                        if e == 1 {
                            p.to_string()
                        } else {
                            format!("{p}^{e}")
                        }
                    })
                    .collect();
                Some(format!("{d} = {}", parts.join(" * ")))
            })
            .collect();
        GroupReport {
            isomorphism_class: gp.isomorphism_class(),
            torsion: gp.torsion().iter().map(|d| d.to_string()).collect(),
            rank: gp.free_rank(),
            primary,
            generators: gp
                .generators()
                .iter()
                .map(|g| GeneratorReport {
                    label: g.label.clone(),
                    expression: format_combination(gp.ambient_names(), &g.expression),
                    order: order_string(&g.order),
                })
                .collect(),
        }
    }

    pub fn render_text(&self, heading: &str) -> String {
        let mut out = format!("{heading} = {}\n", self.isomorphism_class);
        for p in &self.primary {
            out.push_str(&format!("  ({p})\n"));
        }
        for g in &self.generators {
            out.push_str(&format!(
                "  {} = {}  (order {})\n",
                g.label, g.expression, g.order
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KGroupsReport {
    pub vertices: usize,
    pub edges: usize,
    #[serde(rename = "K0")]
    pub k0: GroupReport,
    #[serde(rename = "K1")]
    pub k1: GroupReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub torsion_coordinates: Vec<String>,
    pub free_coordinates: Vec<String>,
}

impl ClassReport {
    pub fn from_element(e: &GroupElement) -> Self {
        ClassReport {
            torsion_coordinates: e.torsion.iter().map(|c| c.to_string()).collect(),
            free_coordinates: e.free.iter().map(|c| c.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarEntryReport {
    pub generator: String,
    pub kind: String,
    pub rank: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarConditionReport {
    pub pass: bool,
    pub entries: Vec<StarEntryReport>,
}

impl StarConditionReport {
    pub fn from_star(star: &StarReport) -> Self {
        StarConditionReport {
            pass: star.passes(),
            entries: star
                .entries
                .iter()
                .map(|e| StarEntryReport {
                    generator: e.label.clone(),
                    kind: match e.kind {
                        GeneratorKind::Vertex => "vertex".to_string(),
                        GeneratorKind::RangeProjection => "range-projection".to_string(),
                        GeneratorKind::Edge => "edge".to_string(),
                    },
                    rank: e.rank,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddModuleReport {
    pub eta: BTreeMap<String, i64>,
    pub edge_index: BTreeMap<String, i64>,
    pub vertex_index: BTreeMap<String, i64>,
    pub class: ClassReport,
    #[serde(rename = "K1")]
    pub group: GroupReport,
    pub star: StarConditionReport,
    pub commutator_ranks: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedModuleReport {
    pub eta: BTreeMap<String, i64>,
    pub index: BTreeMap<String, i64>,
    pub round_trip: bool,
    pub perturbation_ranks: BTreeMap<String, u64>,
}

pub fn vertex_function_map(f: &VertexFunction) -> BTreeMap<String, i64> {
    f.iter().map(|(k, &v)| (k.clone(), v)).collect()
}

pub fn edge_function_map(f: &EdgeFunction) -> BTreeMap<String, i64> {
    f.edges().map(|(k, &v)| (k.clone(), v)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LensGeneratorReport {
    pub m: usize,
    pub index_vector: Vec<i64>,
    pub order: String,
    pub diff_from_first_order: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LensChecksReport {
    pub index_formula: bool,
    pub star_condition: bool,
    pub generation: bool,
    pub eigenspace_additivity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LensReport {
    pub n: usize,
    pub p: usize,
    #[serde(rename = "K0")]
    pub k0: GroupReport,
    #[serde(rename = "K1")]
    pub k1: GroupReport,
    pub generators: Vec<LensGeneratorReport>,
    pub checks: LensChecksReport,
}

impl LensReport {
    pub fn from_lens(report: &LensK1Report) -> Self {
        LensReport {
            n: report.n,
            p: report.p,
            k0: GroupReport::from_presentation(&report.k0),
            k1: GroupReport::from_presentation(&report.k1),
            generators: report
                .generators
                .iter()
                .map(|g| LensGeneratorReport {
                    m: g.m,
                    index_vector: g.index_vector.clone(),
                    order: order_string(&g.order),
                    diff_from_first_order: order_string(&g.diff_from_first_order),
                })
                .collect(),
            checks: LensChecksReport {
                index_formula: report.checks.index_formula,
                star_condition: report.checks.star_condition,
                generation: report.checks.generation,
                eigenspace_additivity: report.checks.eigenspace_additivity,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}
