use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;
use std::path::Path;

use hilbert_hecke::equidist::{
    count, level_index, parse_prime_intervals, predict, run_report, synthesize, tau_source, Dataset, DatasetMeta,
    SynthSpec,
};
use hilbert_hecke::field::{make_field, prime_by_label, primes_up_to_norm, FieldSpec, Ideal, NumberField, PrimeLabel};
use hilbert_hecke::hecke::{brute_force_convolution, s_poly, LocalHeckeElement};
use hilbert_hecke::kloosterman::{
    eval, symmetry_check, weil_scan, CharacterGenerator, DirichletCharacter, KloostermanQuery,
};
use hilbert_hecke::measures::{box_measure, BoxMeasureKind, MeasureKind, SatoTateMeasure, SpectralBox, SpectralMeasure};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::args::{Cli, Command, EquidistCmd, FieldCmd, Format, Global, HeckeCmd, KloostermanCmd, MeasureCmd};
use crate::AppError;

type Out = Result<Vec<u8>, AppError>;

pub fn dispatch(cli: &Cli) -> Out {
    let g = &cli.global;
    let spec: FieldSpec = g.field.parse()?;
    let field = make_field(spec)?;
    match &cli.command {
        Command::Field(cmd) => field_cmd(&field, cmd),
        Command::Hecke(cmd) => hecke_cmd(&field, cmd),
        Command::Measure(cmd) => measure_cmd(&field, cmd),
        Command::Kloosterman(cmd) => kloosterman_cmd(&field, g, cmd),
        Command::Equidist(cmd) => equidist_cmd(&field, g, cmd),
    }
}

fn json_line(v: &Value) -> Out {
    let mut s = serde_json::to_vec(v)?;
    s.push(b'\n');
    Ok(s)
}

fn label(s: &str) -> Result<PrimeLabel, AppError> {
    Ok(s.parse()?)
}

fn level(field: &NumberField, g: &Global) -> Result<Ideal, AppError> {
    Ok(Ideal::principal(field, &field.parse_element(&g.level)?)?)
}

/// Inline JSON, or a path to a JSON file.
fn read_box(spec: &str) -> Result<SpectralBox, AppError> {
    let text = if spec.trim_start().starts_with('{') { spec.to_string() } else { fs::read_to_string(spec)? };
    let omega: SpectralBox = serde_json::from_str(&text)?;
    omega.validate()?;
    Ok(omega)
}

fn field_cmd(field: &NumberField, cmd: &FieldCmd) -> Out {
    match cmd {
        FieldCmd::Info => {
            let units = field.units();
            json_line(&json!({
                "field": field.spec().to_string(),
                "degree": field.degree(),
                "discriminant": field.discriminant(),
                "defining_polynomial": field.defining_polynomial(),
                "fundamental_unit": units.fundamental().map(|e| field.format_element(e)),
                "fundamental_unit_norm": units.fundamental().map(|_| units.fundamental_norm()),
                "regulator": units.regulator(),
            }))
        }
        FieldCmd::Primes { max_norm } => {
            let primes: Vec<Value> = primes_up_to_norm(field, *max_norm)
                .iter()
                .map(|p| {
                    json!({
                        "label": p.label.to_string(),
                        "p": p.p,
                        "norm": p.norm(),
                        "residue_degree": p.residue_degree,
                        "ramification": p.ramification,
                        "generator": p.generator.as_ref().map(|x| field.format_element(x)),
                    })
                })
                .collect();
            json_line(&Value::Array(primes))
        }
    }
}

fn hecke_cmd(field: &NumberField, cmd: &HeckeCmd) -> Out {
    match cmd {
        HeckeCmd::VerifyRelation { p, k, m } => {
            let tally = brute_force_convolution(*p, *k, *m)?;
            let prime = PrimeLabel { p: *p, index: 0 };
            let algebra = LocalHeckeElement::basis(prime, *p, *k as usize)
                .multiply(&LocalHeckeElement::basis(prime, *p, *m as usize))?;
            if tally.product != algebra {
                return Err(AppError::new("hecke", "coset count disagrees with the algebra product"));
            }
            // nonzero terms T(p^{2n}) from the top degree down, as integers
            let mut out = serde_json::Map::new();
            for (n, c) in tally.product.coeffs().iter().enumerate().rev().filter(|(_, c)| !c.is_zero()) {
                let key = format!("T{}", BigInt::from(*p).pow(2 * n as u32));
                let value = c.to_integer().to_i64().ok_or_else(|| AppError::new("hecke", "coefficient overflow"))?;
                out.insert(key, json!(value));
            }
            json_line(&Value::Object(out))
        }
        HeckeCmd::Spoly { p, k } => {
            let prime = prime_by_label(field, label(p)?)?;
            json_line(&json!({
                "prime": prime.label.to_string(),
                "norm": prime.norm(),
                "k": k,
                "coeffs": s_poly(&prime, *k),
            }))
        }
    }
}

fn measure_cmd(field: &NumberField, cmd: &MeasureCmd) -> Out {
    match cmd {
        MeasureCmd::Eval { kind, interval: (a, b) } => {
            let kind: MeasureKind = kind.parse()?;
            let e = SpectralMeasure::new(kind).interval(*a, *b)?;
            json_line(&json!({ "kind": kind.to_string(), "a": a, "b": b, "value": e.value, "error": e.error }))
        }
        MeasureCmd::Phi { p, interval, spoly } => {
            let prime = prime_by_label(field, label(p)?)?;
            let phi = SatoTateMeasure::new(prime.label, prime.norm());
            let value = match (interval, spoly) {
                (Some((a, b)), _) => phi.interval(*a, *b),
                (None, Some(k)) => phi.phi(&s_poly(&prime, *k)),
                (None, None) => return Err(AppError::new("input", "one of --interval or --spoly is required")),
            };
            json_line(&json!({ "prime": prime.label.to_string(), "norm": prime.norm(), "value": value }))
        }
        MeasureCmd::Box { spec, t } => {
            let omega = read_box(spec)?;
            if omega.dimension() != field.degree() {
                return Err(AppError::new(
                    "measure",
                    format!("box has {} coordinates, the field has degree {}", omega.dimension(), field.degree()),
                ));
            }
            let pl = box_measure(BoxMeasureKind::Pl, &omega, *t)?;
            let v1 = box_measure(BoxMeasureKind::V1, &omega, *t)?;
            json_line(&json!({ "t": t, "pl": pl, "v1": v1 }))
        }
    }
}

fn character(field: &NumberField, g: &Global, path: &Option<std::path::PathBuf>) -> Result<DirichletCharacter, AppError> {
    let modulus = level(field, g)?;
    match path {
        None => Ok(DirichletCharacter::trivial(field, &modulus)),
        Some(p) => {
            let gens: Vec<CharacterGenerator> = serde_json::from_str(&fs::read_to_string(p)?)?;
            Ok(DirichletCharacter::from_generators(field, &modulus, &gens)?)
        }
    }
}

fn kloosterman_cmd(field: &NumberField, g: &Global, cmd: &KloostermanCmd) -> Out {
    match cmd {
        KloostermanCmd::Eval { c, r, rp, chi } => {
            let chi = character(field, g, chi)?;
            let q = KloostermanQuery::new(
                field,
                field.parse_element(c)?,
                field.parse_element(r)?,
                field.parse_element(rp)?,
                chi,
            )?;
            let k = eval(field, &q)?;
            let sym = symmetry_check(field, &q)?;
            json_line(&json!({
                "re": k.re,
                "im": k.im,
                "abs": k.norm(),
                "symmetry_max_deviation": sym.max_deviation,
                "symmetry_holds": sym.holds,
            }))
        }
        KloostermanCmd::Scan { max_norm, eps, r, rp, chi } => {
            let chi = character(field, g, chi)?;
            let scan = weil_scan(field, &field.parse_element(r)?, &field.parse_element(rp)?, &chi, *max_norm, *eps, None)?;
            match g.format {
                Format::Json => json_line(&serde_json::to_value(&scan)?),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for row in &scan.rows {
                        w.serialize(row)?;
                    }
                    w.into_inner().map_err(|e| AppError::new("csv", e))
                }
            }
        }
    }
}

fn write_dataset(ds: &Dataset, format: Format) -> Out {
    let mut buf = Vec::new();
    match format {
        Format::Json => ds.write_jsonl(&mut buf)?,
        Format::Csv => ds.write_csv(&mut buf)?,
    }
    Ok(buf)
}

fn read_dataset(field: &NumberField, g: &Global, path: &Path) -> Result<Dataset, AppError> {
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if !is_csv {
        let file = fs::File::open(path)?;
        let meta = DatasetMeta {
            field: field.spec(),
            level: g.level.clone(),
            norms: BTreeMap::new(),
            provenance: BTreeMap::new(),
        };
        return Ok(Dataset::read_jsonl(BufReader::new(file), Some(meta))?);
    }
    let text = fs::read_to_string(path)?;
    let header = text.lines().next().unwrap_or("");
    let mut norms = BTreeMap::new();
    for col in header.split(',').filter(|c| c.contains(':')) {
        let l = label(col.trim())?;
        norms.insert(l, prime_by_label(field, l)?.norm());
    }
    let meta = DatasetMeta { field: field.spec(), level: g.level.clone(), norms, provenance: BTreeMap::new() };
    Ok(Dataset::read_csv(text.as_bytes(), meta)?)
}

fn equidist_cmd(field: &NumberField, g: &Global, cmd: &EquidistCmd) -> Out {
    match cmd {
        EquidistCmd::Synth { omega, t, primes, count } => {
            let primes = primes.iter().map(|p| label(p)).collect::<Result<Vec<_>, _>>()?;
            let spec = SynthSpec { omega: read_box(omega)?, t: *t, primes, count: *count, seed: g.seed };
            let ds = synthesize(field, &g.level, &spec)?;
            write_dataset(&ds, g.format)
        }
        EquidistCmd::Tau { n, table } => {
            let src = tau_source(*n)?;
            if let Some(path) = table {
                let mut w = csv::Writer::from_path(path)?;
                w.write_record(["n", "tau"])?;
                for (i, v) in src.table.iter().enumerate().skip(1) {
                    w.write_record([i.to_string(), v.to_string()])?;
                }
                w.flush()?;
            }
            write_dataset(&src.dataset, g.format)
        }
        EquidistCmd::Run { data, omega, t, intervals, covolume, calibrate_at, summary } => {
            let omega = read_box(omega)?;
            let mut ds = read_dataset(field, g, data)?;
            if ds.meta.field != field.spec() {
                return Err(AppError::new("equidist", format!("dataset is over {}, not {}", ds.meta.field, field.spec())));
            }
            let j = parse_prime_intervals(intervals)?;
            let covolume = match covolume.trim() {
                "index" => level_index(field, &level(field, g)?)?
                    .to_f64()
                    .ok_or_else(|| AppError::new("equidist", "level index is not representable"))?,
                v => v.parse().map_err(|_| AppError::new("input", format!("covolume {v:?}")))?,
            };
            if let Some(tc) = calibrate_at {
                ds.calibrate(predict(field, covolume, &omega, *tc, &BTreeMap::new())?.value)?;
            }
            // validate labels against the data before building the grid
            count(&ds, &omega, t.first().copied().unwrap_or(0.0), &j)?;
            let report = run_report(field, &ds, &omega, t, &j, covolume)?;
            match g.format {
                Format::Json => json_line(&serde_json::to_value(&report)?),
                Format::Csv => {
                    if let Some(path) = summary {
                        fs::write(path, json_line(&serde_json::to_value(&report.summary)?)?)?;
                    }
                    let mut buf = Vec::new();
                    report.write_csv(&mut buf)?;
                    Ok(buf)
                }
            }
        }
    }
}
