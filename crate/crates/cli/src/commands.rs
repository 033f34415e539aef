use std::io::Write;
use std::path::Path;

use harnack::amoeba::{self, Window, DEFAULT_PAD};
use harnack::harnack::{self as hk, RootConfig};
use harnack::mesh::{self, HarnackMesh};
use harnack::poly::LaurentPolynomial;
use harnack::rational::{self, Q};
use harnack::secondary;
use harnack::tropical::{abstract_from_plane, corner_locus, heights_from_f64};
use harnack::{verify as battery, Error, LatticePoint, LatticePolygon};
use serde_json::{json, Value};

use crate::{Io, Raster};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn to_json(&self) -> Value {
        match self {
            CliError::Core(Error::MeshDisagreement(x, y, m)) => {
                json!({ "error": "mesh_disagreement", "message": m, "point": [x, y] })
            }
            CliError::Core(e) => json!({ "error": e.kind(), "message": e.to_string() }),
            CliError::Io(m) => json!({ "error": "io", "message": m }),
            CliError::Usage(m) => json!({ "error": "usage", "message": m }),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numeric() => 2,
            _ => 1,
        }
    }
}

pub type Out = Result<bool, CliError>;

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Core(Error::Parse(format!("{}: {e}", path.display()))))
}

fn input(io: &Io) -> Result<Value, CliError> {
    let p = io.input.as_deref().ok_or_else(|| CliError::Usage("--in is required".into()))?;
    read_json(p)
}

pub fn write_text(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) if p != Path::new("-") => {
            std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = std::io::stdout().lock();
            s.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn emit(io: &Io, v: &Value) -> Result<(), CliError> {
    write_text(io.out.as_deref(), &format!("{v}\n"))
}

pub fn parse_window(s: &str) -> Result<Window, CliError> {
    let xs: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("--window: {e}")))?;
    match xs.as_slice() {
        [x0, x1, y0, y1] => Ok(Window::new(*x0, *x1, *y0, *y1)?),
        _ => Err(CliError::Usage("--window needs four numbers x0,x1,y0,y1".into())),
    }
}

fn check_raster(r: &Raster) -> Result<(), CliError> {
    if r.res < 2 || r.phases < 3 {
        return Err(CliError::Usage("--res must be at least 2 and --phases at least 3".into()));
    }
    if !(r.tol > 0.0 && r.tol.is_finite()) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    if let Some(w) = &r.window {
        parse_window(w)?;
    }
    Ok(())
}

pub fn window_for(f: &LaurentPolynomial, r: &Raster) -> Result<Window, CliError> {
    match &r.window {
        Some(w) => parse_window(w),
        None => Ok(amoeba::default_window(f, DEFAULT_PAD)?),
    }
}

fn polygon_of(v: &Value) -> Result<LatticePolygon, CliError> {
    if v.get("vertices").is_some() {
        Ok(LatticePolygon::from_json(v)?)
    } else if let Some(p) = v.get("polygon") {
        Ok(LatticePolygon::from_json(p)?)
    } else {
        Err(Error::Parse("expected a polygon or a configuration".into()).into())
    }
}

fn points_of(v: &Value) -> Result<Vec<LatticePoint>, CliError> {
    match v.get("points") {
        Some(p) => serde_json::from_value(p.clone()).map_err(|e| CliError::Core(Error::Parse(format!("points: {e}")))),
        None => Ok(polygon_of(v)?.lattice_points()),
    }
}

pub fn polygon(io: &Io) -> Out {
    let p = LatticePolygon::from_json(&input(io)?)?;
    emit(io, &serde_json::to_value(p.stats()).expect("stats serialize"))?;
    Ok(true)
}

pub fn sample(io: &Io, seed: u64) -> Out {
    let p = polygon_of(&input(io)?)?;
    emit(io, &hk::sample_harnack(&p, seed).to_json())?;
    Ok(true)
}

pub fn rho(io: &Io) -> Out {
    let c = RootConfig::from_json(&input(io)?)?;
    emit(io, &json!({ "rho": c.rho()? }))?;
    Ok(true)
}

pub fn jacobian(io: &Io) -> Out {
    let c = RootConfig::from_json(&input(io)?)?;
    let d = c.jacobian()?;
    let rows: Vec<Vec<String>> = d.iter().map(|r| r.iter().map(Q::to_string).collect()).collect();
    emit(
        io,
        &json!({ "d": rows, "rank": harnack::linalg::rank(&d), "eigenvalues": hk::eigenvalues(&d) }),
    )?;
    Ok(true)
}

pub fn tdecomp(io: &Io) -> Out {
    let p = polygon_of(&input(io)?)?;
    let dec = hk::t_decompose(&p.normal_sequence())?;
    emit(io, &dec.to_json())?;
    Ok(true)
}

pub fn implicitize(io: &Io) -> Out {
    let c = RootConfig::from_json(&input(io)?)?;
    emit(io, &hk::implicitize(&c)?.to_json())?;
    Ok(true)
}

pub fn amoeba(io: &Io, r: &Raster) -> Out {
    check_raster(r)?;
    let f = LaurentPolynomial::from_json(&input(io)?)?;
    let w = window_for(&f, r)?;
    let ras = amoeba::raster(&f, w, r.res, r.phases)?;
    let area = amoeba::harnack_area_check(&f, w, r.res, r.phases, r.tol)?;
    emit(io, &json!({ "raster": ras.to_json(), "area_check": area.to_json() }))?;
    Ok(true)
}

pub fn spine(io: &Io, r: &Raster) -> Out {
    check_raster(r)?;
    let f = LaurentPolynomial::from_json(&input(io)?)?;
    let w = window_for(&f, r)?;
    let sh = amoeba::spine_heights(&f, w, r.res, r.phases)?;
    let curve = corner_locus(&heights_from_f64(&sh.heights)?)?;
    let moduli = if sh.missing.is_empty() {
        Some(abstract_from_plane(&curve)?.moduli_point().to_json())
    } else {
        None
    };
    emit(io, &json!({ "spine_heights": sh.to_json(), "curve": curve.to_json(), "moduli_point": moduli }))?;
    Ok(true)
}

pub fn subdivisions(io: &Io) -> Out {
    let pts = points_of(&input(io)?)?;
    let tri = secondary::enumerate_regular_triangulations(&pts)?;
    let list = tri
        .iter()
        .map(|s| {
            let t = s.triangles().expect("triangulations have triangle cells");
            let mut v = s.to_json();
            v["gkz"] = json!(secondary::gkz_vector(&s.points, &t)?);
            Ok(v)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    emit(io, &json!({ "points": pts, "count": tri.len(), "triangulations": list }))?;
    Ok(true)
}

pub fn secondary(io: &Io) -> Out {
    let pts = points_of(&input(io)?)?;
    let sc = secondary::secondary_complex(&pts)?;
    let dims = sc.faces.iter().map(|f| mesh::cell_dimension(&f.subdivision)).collect::<Result<Vec<_>, _>>()?;
    let mut v = sc.to_json();
    v["cell_dimensions"] = json!(dims);
    emit(io, &v)?;
    Ok(true)
}

pub fn mesh(io: &Io, r: &Raster, spine: bool, example: Option<&str>, seed: Option<u64>) -> Out {
    check_raster(r)?;
    if let Some(name) = example {
        let m = match name {
            "cross-diagonal" => {
                let seed = seed.ok_or_else(|| CliError::Usage("--example cross-diagonal needs --seed".into()))?;
                mesh::cross_diagonal_mesh(seed, &rational::q(1))?
            }
            "cross-star" => mesh::cross_star_mesh(1.0)?,
            other => return Err(CliError::Usage(format!("unknown example mesh {other:?}"))),
        };
        emit(io, &m.to_json())?;
        return Ok(true);
    }
    let m = HarnackMesh::from_json(&input(io)?)?;
    if let Some(d) = m.disagreement()? {
        return Err(d.to_error().into());
    }
    let rep = mesh::mesh_validate(&m, r.res, r.phases, r.tol)?;
    let mut v = rep.to_json();
    if spine {
        v["spine"] = mesh::upsilon_s(&m, r.res, r.phases)?.to_json();
    }
    emit(io, &v)?;
    Ok(rep.valid())
}

pub fn parse_sweep(s: &str) -> Result<Vec<f64>, CliError> {
    let ts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("--t-sweep: {e}")))?;
    if ts.is_empty() || ts.iter().any(|t| !(*t > 0.0 && *t <= 1.0)) {
        return Err(CliError::Usage("--t-sweep values must lie in (0, 1]".into()));
    }
    Ok(ts)
}

pub fn patchwork(io: &Io, r: &Raster, sweep: &str, limit: bool) -> Out {
    check_raster(r)?;
    let ts = parse_sweep(sweep)?;
    let m = HarnackMesh::from_json(&input(io)?)?;
    if let Some(d) = m.disagreement()? {
        return Err(d.to_error().into());
    }
    let mut rows = Vec::new();
    for &t in &ts {
        let f = mesh::patchwork(&m, t)?;
        let w = window_for(&f, r)?;
        let area = amoeba::harnack_area_check(&f, w, r.res, r.phases, r.tol)?;
        rows.push(json!({ "t": t, "polynomial": f.to_json(), "area_check": area.to_json() }));
    }
    let mut v = json!({ "rows": rows });
    if limit {
        v["limit"] = mesh::spine_limit_check(&m, &ts, r.res, r.phases, r.tol)?.to_json();
    }
    emit(io, &v)?;
    Ok(true)
}

pub fn verify(io: &Io, suite: &str, polygon: Option<&Path>, seed: u64) -> Out {
    let mut checks = match suite {
        "paper" => battery::acceptance_suite(),
        "none" => Vec::new(),
        other => return Err(CliError::Usage(format!("unknown suite {other:?}; expected \"paper\" or \"none\""))),
    };
    if let Some(p) = polygon {
        let poly = LatticePolygon::from_json(&read_json(p)?)?;
        checks.extend(battery::polygon_suite(&poly, seed));
    }
    let pass = checks.iter().all(|c| c.pass);
    emit(
        io,
        &json!({ "suite": suite, "pass": pass, "checks": checks.iter().map(|c| c.to_json()).collect::<Vec<_>>() }),
    )?;
    Ok(pass)
}
