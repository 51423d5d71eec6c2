use std::fs;
use std::path::Path;

use anyhow::Context;
use serde_json::{json, Value};

use freqcube_core::bitrades::DEFAULT_NODE_CAP;
use freqcube_core::cubes::{
    bound_report, cardinality_report, count_cubes, face_sum_nullity, lk_basis, lk_dimension, reconstruct_baseline,
    reconstruct_csp, FreqParams, PartialCube, PartialCubeDoc, Source, Tagged, DEFAULT_CUBE_NODE_CAP,
};
use freqcube_core::lincodes::{b_n_3, bounds_min_testing, greedy_code_testing_set, hamming_testing_set};
use freqcube_core::pointset::PointSetDoc;
use freqcube_core::testsets::{
    certify_affine, certify_supertesting, certify_testing_by_enumeration, certify_testing_by_sampling,
    min_supertesting_search, Certificate, ConstructionSpec, MinSearchOptions,
};
use freqcube_core::{Error, PointSet};

use crate::{
    BoundsArgs, CertifyArgs, CertifyMode, Cli, Command, ConstructArgs, DimArgs, Failure, Family, Method, ParamArgs,
    ReconstructArgs, ReportArgs, ReportKind, SearchMinArgs,
};

type Outcome = Result<Value, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Construct(a) => construct(a),
        Command::Certify(a) => certify(a, cli.node_cap),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Count(a) => count(a, cli.node_cap),
        Command::SearchMin(a) => search_min(a, cli.node_cap),
        Command::Bounds(a) => bounds(a),
        Command::Dim(a) => dim(a),
        Command::Report(a) => report(a),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("documents serialize")
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A bare point-set document, or any document carrying one under `set`.
fn read_set(path: &Path) -> Result<PointSet, Failure> {
    let value = read_json(path)?;
    let doc = value.get("set").cloned().unwrap_or(value);
    let doc: PointSetDoc =
        serde_json::from_value(doc).map_err(|e| Failure::Usage(format!("{}: not a point set: {e}", path.display())))?;
    Ok(PointSet::from_doc(&doc)?)
}

fn need(value: Option<usize>, flag: &str, family: &str) -> Result<usize, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("family {family} needs --{flag}")))
}

fn family_spec(a: &ConstructArgs, family: Family) -> Result<ConstructionSpec, Failure> {
    Ok(match family {
        Family::Baseline => ConstructionSpec::Baseline {
            q: need(a.q, "q", "baseline")?,
            n: need(a.n, "n", "baseline")?,
            k: need(a.k, "k", "baseline")?,
        },
        Family::ThreeCube => ConstructionSpec::ThreeCube,
        Family::MinimalThreeCube => ConstructionSpec::MinimalThreeCube,
        Family::Q22Recursive => {
            ConstructionSpec::Q22Recursive { n: need(a.n, "n", "q22-recursive")?, k: need(a.k, "k", "q22-recursive")? }
        }
        Family::MainTheorem => {
            ConstructionSpec::MainTheorem { q: need(a.q, "q", "main-theorem")?, n: need(a.n, "n", "main-theorem")? }
        }
        Family::Hamming => ConstructionSpec::Hamming { n: need(a.n, "n", "hamming")?, affine: a.affine },
    })
}

fn construct(a: &ConstructArgs) -> Outcome {
    let spec = match (&a.spec, a.family) {
        (Some(path), _) => serde_json::from_value(read_json(path)?)
            .map_err(|e| Failure::Usage(format!("{}: not a construction spec: {e}", path.display())))?,
        (None, Some(family)) => family_spec(a, family)?,
        (None, None) => return Err(Failure::Usage("give --family or --spec".into())),
    };
    let set = spec.build()?;
    let mut doc = to_value(&set);
    doc["spec"] = to_value(&spec);
    doc["size"] = to_value(&Tagged::new(set.len(), Source::Constructed));
    if let Some(k) = spec.face_dimension() {
        doc["k"] = json!(k);
    }
    Ok(doc)
}

fn verdict(cert: Certificate) -> Outcome {
    let doc = to_value(&cert);
    if cert.holds() {
        Ok(doc)
    } else {
        Err(Failure::Negative(doc))
    }
}

fn certify(a: &CertifyArgs, node_cap: Option<u64>) -> Outcome {
    let set = read_set(&a.set)?;
    let sig = set.sig();
    let cert = match a.mode {
        CertifyMode::Supertesting => certify_supertesting(&set, a.k, node_cap.unwrap_or(DEFAULT_NODE_CAP))?,
        CertifyMode::Affine => certify_affine(&set, a.k)?,
        CertifyMode::Testing => {
            if a.lambdas.is_empty() {
                return Err(Failure::Usage("testing mode needs --lambdas".into()));
            }
            let p = FreqParams::new(sig.q(), sig.n(), a.k, a.lambdas.clone())?;
            let cap = node_cap.unwrap_or(DEFAULT_CUBE_NODE_CAP);
            match (a.sample_draws, a.seed) {
                (Some(draws), Some(seed)) => certify_testing_by_sampling(&set, &p, draws, seed, cap)?,
                (Some(_), None) => return Err(Failure::Usage("--sample-draws needs --seed".into())),
                (None, _) => certify_testing_by_enumeration(&set, &p, cap)?,
            }
        }
    };
    verdict(cert)
}

fn reconstruct(a: &ReconstructArgs) -> Outcome {
    let doc: PartialCubeDoc = serde_json::from_value(read_json(&a.partial)?)
        .map_err(|e| Failure::Usage(format!("{}: not partial cube data: {e}", a.partial.display())))?;
    let partial = PartialCube::from_doc(&doc)?;
    let sig = partial.sig();
    let p = FreqParams::new(sig.q(), sig.n(), a.k, a.lambdas.clone())?;
    let result = match a.method {
        Method::Baseline => reconstruct_baseline(&partial, &p).map(|cube| (cube, true)),
        Method::Csp => reconstruct_csp(&partial, &partial.domain(), &p).map(|c| (c.cube, c.unique)),
    };
    let method = match a.method {
        Method::Baseline => "baseline",
        Method::Csp => "csp",
    };
    match result {
        Ok((cube, unique)) => Ok(json!({
            "method": method,
            "unique": unique,
            "cube": cube.to_doc(Some(p.m()), Some(p.k)),
        })),
        Err(e @ (Error::NoCompletion | Error::Inconsistent(_))) => Err(Failure::Negative(json!({
            "method": method,
            "cube": null,
            "reason": e.to_string(),
        }))),
        Err(e) => Err(e.into()),
    }
}

fn count(a: &ParamArgs, node_cap: Option<u64>) -> Outcome {
    let p = FreqParams::new(a.q, a.n, a.k, a.lambdas.clone())?;
    let count = count_cubes(&p, node_cap.unwrap_or(DEFAULT_CUBE_NODE_CAP))?;
    Ok(json!({
        "params": to_value(&p),
        "count": count,
        "source": Source::Enumerated,
    }))
}

fn search_min(a: &SearchMinArgs, node_cap: Option<u64>) -> Outcome {
    let options = MinSearchOptions {
        node_cap: node_cap.unwrap_or(DEFAULT_NODE_CAP),
        plane_line_filters: !a.no_filters,
        ..MinSearchOptions::default()
    };
    let report = min_supertesting_search(a.q, a.n, a.k, a.bound, &options)?;
    let mut doc = to_value(&report);
    if let Some(set) = &report.found {
        doc["size"] = to_value(&Tagged::new(set.len(), Source::Enumerated));
    }
    Ok(doc)
}

fn bounds(a: &BoundsArgs) -> Outcome {
    let linear = bounds_min_testing(a.n, a.k)?;
    let greedy = greedy_code_testing_set(a.n, a.k)?;
    let mut doc = json!({
        "n": a.n,
        "k": a.k,
        "linear": { "lower": Tagged::new(linear.lower, Source::Formula), "upper": Tagged::new(linear.upper, Source::Formula) },
        "affine": { "lower": Tagged::new(linear.lower + 1, Source::Formula), "upper": Tagged::new(linear.upper + 1, Source::Formula) },
        "greedy": Tagged::new(greedy.len(), Source::Constructed),
    });
    if a.k == 1 {
        let code = b_n_3(a.n)?;
        doc["hamming_affine"] = to_value(&Tagged::new(hamming_testing_set(a.n, true)?.len(), Source::Constructed));
        doc["b_n_3_log2"] = to_value(&Tagged::new(code.exponent, Source::Formula));
    }
    Ok(doc)
}

fn dim(a: &DimArgs) -> Outcome {
    let dimension = lk_dimension(a.q, a.n, a.k)?;
    let nullity = face_sum_nullity(a.q, a.n, a.k)?;
    let basis = lk_basis(a.q, a.n, a.k)?.len();
    let doc = json!({
        "q": a.q,
        "n": a.n,
        "k": a.k,
        "dimension": Tagged::new(dimension, Source::Formula),
        "nullity": Tagged::new(nullity, Source::Constructed),
        "basis_size": Tagged::new(basis, Source::Constructed),
        "agree": dimension == nullity && nullity == basis,
    });
    if dimension == nullity && nullity == basis {
        Ok(doc)
    } else {
        Err(Failure::Negative(doc))
    }
}

fn report(a: &ReportArgs) -> Outcome {
    match a.kind {
        ReportKind::Cardinality => Ok(to_value(&cardinality_report(a.q, a.n, a.k)?)),
        ReportKind::Bound => Ok(to_value(&bound_report(a.q, a.n)?)),
    }
}
