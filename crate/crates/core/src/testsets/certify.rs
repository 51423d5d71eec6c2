use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::array::{CubeArray, CubeDoc};
use crate::bitrades::find_bitrade_avoiding;
use crate::cubes::{for_each_cube, sample_cubes, FreqParams};
use crate::error::{Error, Result};
use crate::lincodes::{vanishing_function, AffineFn, BinMatrix};
use crate::pointset::PointSet;

pub const TOOL_VERSION: &str = concat!("freqcube ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    SupertestingByExhaustion,
    TestingByEnumeration,
    /// Injectivity observed on a seeded sample only; never a proof.
    TestingBySampling,
    TestingForAffine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertParams {
    pub q: usize,
    pub n: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_size: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub draws: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distinct: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functions_checked: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vanishing: Option<AffineFn>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub verdict: Verdict,
    pub set: PointSet,
    pub params: CertParams,
    pub evidence: Evidence,
    /// A nonzero bitrade avoiding the set, or two cubes with equal
    /// restrictions.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<CubeDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub tool_version: String,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    /// Re-runs the oracle named by `kind` and reports whether it reaches
    /// the same verdict.
    pub fn replay(&self, node_cap: u64) -> Result<bool> {
        let again = match self.kind {
            CertificateKind::SupertestingByExhaustion => certify_supertesting(&self.set, self.params.k, node_cap)?,
            CertificateKind::TestingByEnumeration => {
                certify_testing_by_enumeration(&self.set, &self.family()?, node_cap)?
            }
            CertificateKind::TestingBySampling => {
                let (draws, seed) = self
                    .evidence
                    .draws
                    .zip(self.evidence.seed)
                    .ok_or_else(|| Error::Parse("sampling certificate without draws and seed".into()))?;
                certify_testing_by_sampling(&self.set, &self.family()?, draws, seed, node_cap)?
            }
            CertificateKind::TestingForAffine => certify_affine(&self.set, self.params.k)?,
        };
        Ok(again.verdict == self.verdict && again.evidence == self.evidence)
    }

    fn family(&self) -> Result<FreqParams> {
        let lambdas = self
            .params
            .lambdas
            .clone()
            .ok_or_else(|| Error::Parse("testing certificate without multiplicities".into()))?;
        FreqParams::new(self.params.q, self.params.n, self.params.k, lambdas)
    }
}

/// Supertesting for `k`-faces iff no nonzero `k`-bitrade vanishes on the
/// set. A capped search is an error, not a verdict.
pub fn certify_supertesting(set: &PointSet, k: usize, node_cap: u64) -> Result<Certificate> {
    let sig = set.sig();
    let outcome = find_bitrade_avoiding(sig, k, set, node_cap)?;
    if outcome.witness.is_none() && !outcome.exhausted {
        return Err(Error::ResourceLimit { nodes: outcome.nodes });
    }
    let verdict = if outcome.witness.is_some() { Verdict::Fails } else { Verdict::Holds };
    Ok(Certificate {
        kind: CertificateKind::SupertestingByExhaustion,
        verdict,
        set: set.clone(),
        params: CertParams { q: sig.q(), n: sig.n(), k, lambdas: None },
        evidence: Evidence { nodes: Some(outcome.nodes), ..Evidence::default() },
        witness: outcome.witness.iter().map(|w| w.to_doc(None, Some(k))).collect(),
        warnings: Vec::new(),
        tool_version: TOOL_VERSION.into(),
    })
}

fn restriction(f: &CubeArray, set: &PointSet) -> Vec<u8> {
    set.indices().iter().map(|&i| f.at(i) as u8).collect()
}

fn testing_certificate(set: &PointSet, p: &FreqParams, kind: CertificateKind) -> Certificate {
    Certificate {
        kind,
        verdict: Verdict::Holds,
        set: set.clone(),
        params: CertParams { q: p.q, n: p.n, k: p.k, lambdas: Some(p.lambdas.clone()) },
        evidence: Evidence::default(),
        witness: Vec::new(),
        warnings: Vec::new(),
        tool_version: TOOL_VERSION.into(),
    }
}

fn check_family(set: &PointSet, p: &FreqParams) -> Result<()> {
    if set.sig() != p.sig()? {
        return Err(Error::DimensionMismatch(format!("set in {}, family over [{}]^{}", set.sig(), p.q, p.n)));
    }
    Ok(())
}

/// Testing iff restriction to the set is injective on the whole family,
/// which is enumerated exhaustively.
pub fn certify_testing_by_enumeration(set: &PointSet, p: &FreqParams, node_cap: u64) -> Result<Certificate> {
    check_family(set, p)?;
    let m = p.m();
    let mut cert = testing_certificate(set, p, CertificateKind::TestingByEnumeration);
    let mut seen: HashMap<Vec<u8>, CubeArray> = HashMap::new();
    let mut size = 0u64;
    let mut collision = None;
    for_each_cube(p, node_cap, |f| {
        size += 1;
        let key = restriction(f, set);
        if let Some(prev) = seen.get(&key) {
            collision = Some((prev.clone(), f.clone()));
            return false;
        }
        seen.insert(key, f.clone());
        true
    })?;
    if let Some((a, b)) = collision {
        cert.verdict = Verdict::Fails;
        cert.witness = vec![a.to_doc(Some(m), Some(p.k)), b.to_doc(Some(m), Some(p.k))];
        cert.evidence.family_size = None;
    } else {
        cert.evidence.family_size = Some(size);
    }
    Ok(cert)
}

/// Injectivity on `draws` seeded random members. The certificate records
/// how many distinct members were actually seen.
pub fn certify_testing_by_sampling(
    set: &PointSet,
    p: &FreqParams,
    draws: usize,
    seed: u64,
    node_cap: u64,
) -> Result<Certificate> {
    check_family(set, p)?;
    let run = sample_cubes(p, draws, seed, node_cap)?;
    let mut cert = testing_certificate(set, p, CertificateKind::TestingBySampling);
    cert.evidence.draws = Some(draws);
    cert.evidence.seed = Some(seed);
    cert.evidence.distinct = Some(run.distinct);
    let mut seen: HashMap<Vec<u8>, &CubeArray> = HashMap::new();
    for f in &run.members {
        if let Some(prev) = seen.insert(restriction(f, set), f) {
            cert.verdict = Verdict::Fails;
            cert.witness = vec![prev.to_doc(Some(p.m()), Some(p.k)), f.to_doc(Some(p.m()), Some(p.k))];
            break;
        }
    }
    cert.warnings.push(format!("sampled {} distinct members from {draws} draws", run.distinct));
    Ok(cert)
}

/// Over `[2]^n`: testing for affine functions with at most `k` essential
/// variables iff no nonzero affine function on at most `2k` variables
/// vanishes on the set.
pub fn certify_affine(set: &PointSet, k: usize) -> Result<Certificate> {
    let sig = set.sig();
    let vanishing = vanishing_function(set, k, true)?;
    let mut warnings = Vec::new();
    let (_, dropped) = BinMatrix::from_points(set)?.independent_rows();
    if dropped > 0 {
        warnings.push(format!("{dropped} of {} points are linearly dependent on the others", set.len()));
    }
    Ok(Certificate {
        kind: CertificateKind::TestingForAffine,
        verdict: if vanishing.is_some() { Verdict::Fails } else { Verdict::Holds },
        set: set.clone(),
        params: CertParams { q: 2, n: sig.n(), k, lambdas: None },
        evidence: Evidence {
            functions_checked: Some(AffineFn::all_with_at_most(sig.n(), 2 * k).len()),
            vanishing,
            ..Evidence::default()
        },
        witness: Vec::new(),
        warnings,
        tool_version: TOOL_VERSION.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitrades::DEFAULT_NODE_CAP;
    use crate::cubes::DEFAULT_CUBE_NODE_CAP;
    use crate::grid::GridSig;
    use crate::lincodes::hamming_testing_set;
    use crate::testsets::{baseline_set, three_cube_set};

    #[test]
    fn supertesting_certificates() {
        let t = three_cube_set();
        let c = certify_supertesting(&t, 1, DEFAULT_NODE_CAP).unwrap();
        assert!(c.holds());
        assert!(c.witness.is_empty());
        assert!(c.replay(DEFAULT_NODE_CAP).unwrap());
        let short = t.without_nth(0);
        let c = certify_supertesting(&short, 1, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(c.verdict, Verdict::Fails);
        let w = CubeArray::from_doc(&c.witness[0]).unwrap();
        assert!(!w.is_zero());
        assert!(short.indices().iter().all(|&i| w.at(i) == 0));
        assert!(matches!(certify_supertesting(&t, 1, 3), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn enumeration_certificates() {
        let p = FreqParams::new(3, 2, 1, vec![1, 1, 1]).unwrap();
        let c = certify_testing_by_enumeration(&baseline_set(3, 2, 1).unwrap(), &p, DEFAULT_CUBE_NODE_CAP).unwrap();
        assert!(c.holds());
        assert_eq!(c.evidence.family_size, Some(12));
        let empty = PointSet::empty(p.sig().unwrap());
        let c = certify_testing_by_enumeration(&empty, &p, DEFAULT_CUBE_NODE_CAP).unwrap();
        assert_eq!(c.verdict, Verdict::Fails);
        assert_eq!(c.witness.len(), 2);
        assert_ne!(c.witness[0].values, c.witness[1].values);
        let p3 = FreqParams::new(3, 3, 1, vec![1, 1, 1]).unwrap();
        let c = certify_testing_by_enumeration(&three_cube_set(), &p3, DEFAULT_CUBE_NODE_CAP).unwrap();
        assert!(c.holds());
        assert!(c.replay(DEFAULT_CUBE_NODE_CAP).unwrap());
        assert!(certify_testing_by_enumeration(&three_cube_set(), &p, DEFAULT_CUBE_NODE_CAP).is_err());
    }

    #[test]
    fn sampling_certificate_is_replayable() {
        let p = FreqParams::new(3, 3, 1, vec![2, 1]).unwrap();
        let c = certify_testing_by_sampling(&three_cube_set(), &p, 40, 7, DEFAULT_CUBE_NODE_CAP).unwrap();
        assert_eq!(c.kind, CertificateKind::TestingBySampling);
        assert!(c.holds());
        assert!(c.evidence.distinct.unwrap() <= 40);
        assert!(c.replay(DEFAULT_CUBE_NODE_CAP).unwrap());
    }

    #[test]
    fn affine_certificates() {
        let h = hamming_testing_set(7, true).unwrap();
        let c = certify_affine(&h, 1).unwrap();
        assert!(c.holds());
        assert_eq!(c.warnings, vec!["1 of 4 points are linearly dependent on the others".to_string()]);
        assert!(certify_affine(&hamming_testing_set(7, false).unwrap(), 1).unwrap().warnings.is_empty());
        let sig = GridSig::new(2, 3).unwrap();
        let c = certify_affine(&PointSet::empty(sig), 1).unwrap();
        assert_eq!(c.verdict, Verdict::Fails);
        assert!(c.evidence.vanishing.is_some());
        let json = serde_json::to_string(&c).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
