//! Serializable certificates for constructed automorphisms and their
//! independent re-verification.

use serde::{Deserialize, Serialize};

use crate::automorphism::{
    berkovich_general, berkovich_thin, broken_relator, innerness_witness, route_hypotheses, Automorphism,
    Construction, Route,
};
use crate::error::{Error, Result};
use crate::pc::{GroupElement, PcGroup};
use crate::structure::StructureReport;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    /// `"exhaustive"` when every element of the group was tried as a
    /// conjugator.
    pub method: String,
    pub search_size: u64,
}

/// A non-inner automorphism of order `p` together with the data needed to
/// re-check it. The JSON form has no timestamps, so it is reproducible byte
/// for byte.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub group_digest: String,
    pub route: String,
    /// Exponent vectors of the images of the PC generators.
    pub images: Vec<Vec<u32>>,
    pub order: u64,
    pub non_inner_evidence: Evidence,
    pub structure: StructureReport,
}

impl Certificate {
    pub fn from_construction(g: &PcGroup, c: &Construction) -> Result<Self> {
        Ok(Certificate {
            group_digest: g.presentation().digest(),
            route: c.method.label().to_string(),
            images: c.automorphism.images().iter().map(|x| x.exps().to_vec()).collect(),
            order: c.order,
            non_inner_evidence: Evidence {
                method: "exhaustive".into(),
                search_size: c.search_size,
            },
            structure: g.structure_report()?,
        })
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificates always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Routes `g` and runs the matching construction. Reduction routes are
/// reported as [`Error::RouteMismatch`].
pub fn construct(g: &PcGroup) -> Result<Certificate> {
    let route = route_hypotheses(g)?;
    let c = match route {
        Route::Thin => berkovich_thin(g)?,
        Route::ManyGenerators => berkovich_general(g)?,
        other => {
            return Err(Error::RouteMismatch {
                expected: "a theorem route".into(),
                found: other.label().into(),
            })
        }
    };
    Certificate::from_construction(g, &c)
}

/// Result of [`verify_certificate`]: `ok` iff `diffs` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub ok: bool,
    pub diffs: Vec<String>,
}

/// Re-checks a certificate from scratch: digest, relator preservation,
/// order `p`, an exhaustive innerness scan and the structure report.
pub fn verify_certificate(g: &PcGroup, cert: &Certificate) -> Verification {
    let mut diffs = Vec::new();
    let digest = g.presentation().digest();
    if cert.group_digest != digest {
        diffs.push(format!("group digest {} != {}", cert.group_digest, digest));
    }
    let n = g.ngens();
    let p = g.prime();
    let shape_ok = cert.images.len() == n && cert.images.iter().all(|v| v.len() == n && v.iter().all(|&e| e < p));
    if !shape_ok {
        diffs.push(format!("images must be {n} exponent vectors of length {n} with entries below {p}"));
        return Verification { ok: false, diffs };
    }
    let images: Vec<GroupElement> = cert.images.iter().map(|v| GroupElement::from_exps(v.clone())).collect();
    if let Some(r) = broken_relator(g, &images) {
        diffs.push(format!("relator {r} is not preserved"));
    }
    match Automorphism::from_images(g, images) {
        Err(e) => diffs.push(format!("not an automorphism: {e}")),
        Ok(phi) => {
            match phi.order(g) {
                Ok(k) if k == p as u64 && k == cert.order => {}
                Ok(k) => diffs.push(format!("order {k}, certificate claims {}, expected {p}", cert.order)),
                Err(e) => diffs.push(format!("order: {e}")),
            }
            match innerness_witness(g, &phi) {
                Ok(Some(h)) => diffs.push(format!("inner: conjugation by {h:?}")),
                Ok(None) => {
                    if cert.non_inner_evidence.method != "exhaustive" || cert.non_inner_evidence.search_size != g.order() {
                        diffs.push(format!(
                            "evidence {:?} does not match an exhaustive scan of {} elements",
                            cert.non_inner_evidence,
                            g.order()
                        ));
                    }
                }
                Err(e) => diffs.push(format!("innerness scan: {e}")),
            }
        }
    }
    match g.structure_report() {
        Ok(report) => {
            if report != cert.structure {
                diffs.push("structure report differs from a fresh computation".into());
            }
            if !cert.route.starts_with(&report.hypothesis_route) || report.hypothesis_route.starts_with("reduction") {
                diffs.push(format!("route {} does not match {}", cert.route, report.hypothesis_route));
            }
        }
        Err(e) => diffs.push(format!("structure report: {e}")),
    }
    Verification {
        ok: diffs.is_empty(),
        diffs,
    }
}
