use std::fmt;
use std::path::{Path, PathBuf};

use kldiv::format::{
    parse_block_pair, ConfigEcho, HessianBlockData, InstanceFile, JacobianBlockData, MatrixData,
    OutputDocument, Payload, VectorData,
};
use kldiv::matcalc::max_abs;
use kldiv::oracle::checks::{check_pair, spectrum, CheckConfig};
use kldiv::oracle::random::{random_pair, rng_for, stream_id};
use kldiv::oracle::{identity_suite, report::all_passed};
use kldiv::{
    assemble_hessian, assemble_jacobian, hessian_block, jacobian_block, kld_value, Basis, BlockId,
    GaussianPair,
};

#[derive(Debug)]
pub enum CliError {
    /// Unreadable file, malformed JSON, wrong shapes, bad flag values.
    Input(String),
    /// Parsed, but not a valid Gaussian pair.
    InvalidInstance(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::InvalidInstance(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "{msg}"),
            CliError::InvalidInstance(msg) => write!(f, "invalid instance: {msg}"),
        }
    }
}

pub struct Outcome {
    pub document: OutputDocument,
    pub exit_code: u8,
}

impl Outcome {
    fn ok(document: OutputDocument) -> Self {
        Self {
            document,
            exit_code: 0,
        }
    }
}

struct Loaded {
    name: Option<String>,
    pair: GaussianPair,
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let file = InstanceFile::from_slice(&bytes)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let pair = file
        .to_pair()
        .map_err(|e| CliError::InvalidInstance(format!("{}: {e}", path.display())))?;
    let name = file
        .name
        .clone()
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()));
    Ok(Loaded { name, pair })
}

pub fn kld(path: &Path) -> Result<Outcome, CliError> {
    let loaded = load(path)?;
    let value = kld_value(&loaded.pair);
    Ok(Outcome::ok(OutputDocument::new(
        "kld",
        loaded.name,
        None,
        ConfigEcho::default(),
        Payload::scalar(value),
    )))
}

pub fn jacobian(path: &Path, basis: Basis, block: &str) -> Result<Outcome, CliError> {
    let loaded = load(path)?;
    let pair = &loaded.pair;
    let payload = if block == "all" {
        let jac = assemble_jacobian(pair, basis);
        Payload::Jacobian {
            blocks: BlockId::ALL
                .iter()
                .map(|&id| block_data(id, jac.block(id)))
                .collect(),
            assembled: Some(VectorData::from_vector(&jac.assembled)),
        }
    } else {
        let id: BlockId = block.parse().map_err(CliError::Input)?;
        Payload::Jacobian {
            blocks: vec![block_data(id, &jacobian_block(pair, id, basis))],
            assembled: None,
        }
    };
    Ok(Outcome::ok(OutputDocument::new(
        "jacobian",
        loaded.name,
        Some(basis),
        ConfigEcho {
            block: Some(block.to_string()),
            ..ConfigEcho::default()
        },
        payload,
    )))
}

fn block_data(id: BlockId, v: &kldiv::RealVector) -> JacobianBlockData {
    JacobianBlockData {
        block: id.symbol().into(),
        len: v.len(),
        data: v.iter().copied().collect(),
    }
}

pub fn hessian(path: &Path, basis: Basis, block: &str) -> Result<Outcome, CliError> {
    let loaded = load(path)?;
    let pair = &loaded.pair;
    let payload = if block == "all" {
        let h = assemble_hessian(pair, basis);
        let mut blocks = Vec::with_capacity(16);
        for r in BlockId::ALL {
            for c in BlockId::ALL {
                blocks.push(HessianBlockData::new(r, c, h.block(r, c)));
            }
        }
        let (min_eigenvalue, _) = spectrum(&h.assembled);
        Payload::Hessian {
            blocks,
            assembled: Some(MatrixData::from_matrix(&h.assembled)),
            symmetry_residual: h.symmetry_residual(),
            min_eigenvalue: Some(min_eigenvalue),
        }
    } else {
        let (r, c) = parse_block_pair(block).map_err(CliError::Input)?;
        let b = hessian_block(pair, r, c, basis);
        let partner = hessian_block(pair, c, r, basis);
        Payload::Hessian {
            blocks: vec![HessianBlockData::new(r, c, &b)],
            assembled: None,
            symmetry_residual: max_abs(&(&b - partner.transpose())),
            min_eigenvalue: None,
        }
    };
    Ok(Outcome::ok(OutputDocument::new(
        "hessian",
        loaded.name,
        Some(basis),
        ConfigEcho {
            block: Some(block.to_string()),
            ..ConfigEcho::default()
        },
        payload,
    )))
}

pub enum CheckSource {
    File(PathBuf),
    Random { n: usize, seed: u64, trials: usize },
}

fn positive(name: &str, value: f64) -> Result<f64, CliError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(CliError::Input(format!("{name} must be a non-negative number, got {value}")))
    }
}

pub fn check(source: CheckSource, tol_grad: f64, tol_hess: f64) -> Result<Outcome, CliError> {
    let cfg = CheckConfig {
        tol_grad: positive("--tol-grad", tol_grad)?,
        tol_hess: positive("--tol-hess", tol_hess)?,
        ..CheckConfig::default()
    };
    let mut echo = ConfigEcho {
        tol_grad: Some(cfg.tol_grad),
        tol_hess: Some(cfg.tol_hess),
        grad_step: Some(cfg.grad_fd.step),
        hess_step: Some(cfg.hess_fd.step),
        ..ConfigEcho::default()
    };
    let (instance, reports) = match source {
        CheckSource::File(path) => {
            let loaded = load(&path)?;
            (loaded.name, check_pair(&loaded.pair, &cfg, ""))
        }
        CheckSource::Random { n, seed, trials } => {
            echo.seed = Some(seed);
            echo.random_n = Some(n);
            echo.trials = Some(trials);
            let stream = stream_id("cli-check");
            let mut reports = Vec::new();
            for t in 0..trials {
                let pair = random_pair(&mut rng_for(seed, stream, t as u64), n);
                reports.extend(check_pair(&pair, &cfg, &format!("random[{t}]/")));
            }
            (None, reports)
        }
    };
    let exit_code = if all_passed(&reports) { 0 } else { 1 };
    Ok(Outcome {
        document: OutputDocument::new("check", instance, None, echo, Payload::reports(reports)),
        exit_code,
    })
}

pub fn identities(seed: u64, dims: &[usize], trials: usize) -> Result<Outcome, CliError> {
    let reports =
        identity_suite(seed, dims, trials).map_err(|e| CliError::Input(e.to_string()))?;
    let exit_code = if all_passed(&reports) { 0 } else { 1 };
    Ok(Outcome {
        document: OutputDocument::new(
            "identities",
            None,
            None,
            ConfigEcho {
                seed: Some(seed),
                dims: Some(dims.to_vec()),
                trials: Some(trials),
                ..ConfigEcho::default()
            },
            Payload::reports(reports),
        ),
        exit_code,
    })
}
