//! The JSON/CSV report shared by every subcommand.

use serde::{Deserialize, Serialize};

/// One classified coset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetRow {
    pub config: String,
    pub coset: String,
    pub case_tag: String,
    pub x0_verdict: String,
    pub xnz_verdict: String,
    pub witness: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivorRow {
    pub config: String,
    pub coset: String,
    pub is_w0: bool,
}

/// One structural check on one configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub check: String,
    pub config: String,
    pub hypothesis_count: usize,
    pub pass: bool,
    pub vacuous: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRow {
    pub theta: Vec<String>,
    pub alpha: String,
    pub w_cycles: String,
}

/// The factorization of one `w` from `θ` to `θ'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRow {
    pub w: String,
    pub factors: Vec<FactorRow>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatcheckRow {
    pub group: String,
    pub ring: String,
    pub identity: String,
    pub trials: usize,
    pub seed: u64,
    pub failures: usize,
    pub commutation_signs: Vec<i8>,
    pub pass: bool,
}

/// One `R_χ`-orbit from the finite-field oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRow {
    pub size: usize,
    pub coset_key: String,
    pub x: Vec<u8>,
    pub killed_by_unipotent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub q: u64,
    pub delta: i64,
    pub group_order: Option<usize>,
    pub points: usize,
    pub m_chi_order: usize,
    pub covered: bool,
    pub length_determines_orbit: bool,
    pub orbits: Vec<OrbitRow>,
}

/// Everything one invocation produces. Field order is fixed so equal inputs
/// give byte-identical JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub command: String,
    pub group: String,
    pub r: String,
    pub n: Option<String>,
    pub ell1: Option<String>,
    pub cosets: Vec<CosetRow>,
    pub survivors: Vec<SurvivorRow>,
    pub lemmas: Vec<LemmaRow>,
    pub chains: Vec<ChainRow>,
    pub matchecks: Vec<MatcheckRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    pub counterexamples: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str, group: String, r: String, n: Option<String>, ell1: Option<String>) -> RunReport {
        RunReport {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            group,
            r,
            n,
            ell1,
            cosets: Vec::new(),
            survivors: Vec::new(),
            lemmas: Vec::new(),
            chains: Vec::new(),
            matchecks: Vec::new(),
            oracle: None,
            counterexamples: Vec::new(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(!self.counterexamples.is_empty())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flat table for the command's main rows. Classification tables gain a
    /// leading `config` column only when several configurations were run.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match self.command.as_str() {
            "classify" => {
                let many = self.cosets.iter().any(|c| c.config != self.cosets[0].config);
                let head = ["coset", "case_tag", "x0_verdict", "xnz_verdict", "witness"];
                if many {
                    w.write_record(std::iter::once("config").chain(head))?;
                } else {
                    w.write_record(head)?;
                }
                for c in &self.cosets {
                    let row = [&c.coset, &c.case_tag, &c.x0_verdict, &c.xnz_verdict, &c.witness];
                    if many {
                        w.write_record(std::iter::once(&c.config).chain(row))?;
                    } else {
                        w.write_record(row)?;
                    }
                }
            }
            "verify" => {
                w.write_record(["check", "config", "hypothesis_count", "pass", "vacuous", "counterexample"])?;
                for l in &self.lemmas {
                    w.write_record([
                        l.check.clone(),
                        l.config.clone(),
                        l.hypothesis_count.to_string(),
                        l.pass.to_string(),
                        l.vacuous.to_string(),
                        l.counterexample.clone().unwrap_or_default(),
                    ])?;
                }
            }
            "chain" => {
                w.write_record(["w", "step", "theta", "alpha", "w_cycles", "pass"])?;
                for c in &self.chains {
                    for (i, f) in c.factors.iter().enumerate() {
                        w.write_record([
                            c.w.clone(),
                            (i + 1).to_string(),
                            f.theta.join(" "),
                            f.alpha.clone(),
                            f.w_cycles.clone(),
                            c.pass.to_string(),
                        ])?;
                    }
                }
            }
            "matcheck" => {
                w.write_record(["group", "ring", "identity", "trials", "seed", "failures", "pass"])?;
                for m in &self.matchecks {
                    w.write_record([
                        m.group.clone(),
                        m.ring.clone(),
                        m.identity.clone(),
                        m.trials.to_string(),
                        m.seed.to_string(),
                        m.failures.to_string(),
                        m.pass.to_string(),
                    ])?;
                }
            }
            _ => {
                w.write_record(["size", "coset_key", "x", "killed_by_unipotent"])?;
                for o in self.oracle.iter().flat_map(|o| &o.orbits) {
                    let x: Vec<String> = o.x.iter().map(u8::to_string).collect();
                    w.write_record([o.size.to_string(), o.coset_key.clone(), x.join(" "), o.killed_by_unipotent.to_string()])?;
                }
            }
        }
        Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut r = RunReport::new("classify", "so-odd".into(), "2".into(), Some("1".into()), None);
        r.cosets.push(CosetRow {
            config: "so-odd r=2 n=1 ell1=1".into(),
            coset: "(1 5)".into(),
            case_tag: "W0".into(),
            x0_verdict: "survivor".into(),
            xnz_verdict: "survivor".into(),
            witness: String::new(),
            note: Some("generic".into()),
        });
        r.counterexamples.push("x".into());
        let back: RunReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.exit_code(), 1);
    }
}
