//! Executes distance, oracle and reduce requests against the core
//! library and shapes the outcomes into wire types.

use std::time::Instant;

use latdist_api as api;
use latdist_core::code::{LinearCode, OracleConfig};
use latdist_core::distance::{self, DistanceConfig, Progress};
use latdist_core::lattice::ReductionParams;
use latdist_core::{io, Error, Field};

/// Maps a core error to its wire form and exit code.
pub fn error_info(err: &Error) -> api::ErrorInfo {
    let (kind, exit_code) = match err {
        Error::Parse { .. } | Error::BadFieldSpec(_) => ("parse", api::EXIT_PARSE),
        Error::BudgetExceeded(_) => ("budget", api::EXIT_VALIDATION),
        Error::Internal(_) | Error::InvalidGso | Error::CorruptedEmbedding => {
            ("internal", api::EXIT_INTERNAL)
        }
        _ => ("validation", api::EXIT_VALIDATION),
    };
    api::ErrorInfo { kind: kind.into(), message: err.to_string(), exit_code }
}

fn config_from(cfg: &api::JobConfig, binary_image: bool, full_radius: bool) -> api::ConfigEcho {
    api::ConfigEcho {
        beta: cfg.beta,
        delta: cfg.delta,
        scale: cfg.scale,
        threads: cfg.threads,
        node_budget: cfg.node_budget,
        certify: cfg.certify,
        harvest_rounds: cfg.harvest_rounds,
        binary_image,
        full_radius,
    }
}

/// Resolves the field: an explicit spec string wins, otherwise the input
/// header decides (matrix header q, or the alist's declared q with GF(2)
/// as the binary default).
fn resolve_field(req: &api::JobRequest) -> Result<Field, Error> {
    if let Some(spec) = &req.field {
        return io::parse_field_spec(spec);
    }
    match req.format.as_str() {
        "matrix" => {
            let (_, _, q) = io::matrix_header(&req.input_text)?;
            io::field_for_order(q)
        }
        "alist" => match io::alist_declared_q(&req.input_text)? {
            Some(q) => io::field_for_order(q),
            None => Ok(Field::gf2()),
        },
        other => Err(Error::Unsupported(format!("unknown input format {:?}", other))),
    }
}

fn load_code(req: &api::JobRequest, field: Field) -> Result<LinearCode, Error> {
    match req.format.as_str() {
        "matrix" => LinearCode::from_generator(io::parse_matrix(&req.input_text, field)?),
        "alist" => LinearCode::from_parity(io::parse_alist(&req.input_text, field)?),
        other => Err(Error::Unsupported(format!("unknown input format {:?}", other))),
    }
}

pub fn run_job(req: &api::JobRequest, progress: &dyn Progress) -> Result<api::RunReport, api::ErrorInfo> {
    run_job_inner(req, progress).map_err(|e| error_info(&e))
}

fn run_job_inner(req: &api::JobRequest, progress: &dyn Progress) -> Result<api::RunReport, Error> {
    let field = resolve_field(req)?;
    let code = load_code(req, field)?;
    if req.binary_image && !field.is_extension() {
        return Err(Error::ExtensionFieldRequired);
    }
    if field.is_extension() && !req.binary_image {
        return Err(Error::Unsupported(format!(
            "GF({}) inputs need --binary-image to map onto the binary lattice pipeline",
            field.q()
        )));
    }
    let input = api::InputInfo {
        file: req.input_name.clone(),
        format: req.format.clone(),
        field: field.spec_string(),
        n: code.len() as u64,
        k: code.dim() as u64,
    };
    match req.kind.as_str() {
        "distance" => {
            let cfg = DistanceConfig {
                beta: req.config.beta as usize,
                delta: req.config.delta,
                scale: req.config.scale,
                node_budget: req.config.node_budget,
                certify: req.config.certify,
                threads: req.config.threads as usize,
                harvest_rounds: req.config.harvest_rounds as usize,
                full_radius: req.config.full_radius,
                ..DistanceConfig::default()
            };
            let result = if req.binary_image {
                distance::binary_image_distance_with_progress(&code, &cfg, progress)?
            } else {
                distance::min_distance_with_progress(&code, &cfg, progress)?
            };
            Ok(api::RunReport {
                input,
                config: config_from(&req.config, req.binary_image, req.config.full_radius),
                result: api::ResultInfo {
                    d_best: result.d_best as u64,
                    witness: result.witness.symbols().to_vec(),
                    status: result.status.as_str().into(),
                    progress: api::ProgressInfo {
                        searched: result.progress.0,
                        total: result.progress.1,
                    },
                },
                stats: api::StatsInfo {
                    wall_ms: result.stats.wall.as_millis() as u64,
                    nodes: result.stats.nodes,
                    reduction_rounds: result.stats.reduction_rounds as u64,
                    field_rep: result.stats.field_spec.clone(),
                    image: result.stats.image_dims.map(|(n, k)| (n as u64, k as u64)),
                },
                version: crate::version(),
            })
        }
        "oracle" => {
            let started = Instant::now();
            progress.stage("oracle");
            let (target, image) = if req.binary_image {
                let img = code.binary_image()?;
                let dims = (img.len() as u64, img.dim() as u64);
                (img, Some(dims))
            } else {
                (code, None)
            };
            let oracle_cfg = OracleConfig {
                cap: None,
                max_messages: req.config.max_messages as u128,
                threads: req.config.threads as usize,
            };
            let (d, witness) = target.brute_force_distance(&oracle_cfg)?;
            let scanned = (target.field().q() as u128)
                .pow(target.dim() as u32)
                .saturating_sub(1)
                .min(u64::MAX as u128) as u64;
            Ok(api::RunReport {
                input,
                config: config_from(&req.config, req.binary_image, false),
                result: api::ResultInfo {
                    d_best: d as u64,
                    witness: witness.symbols().to_vec(),
                    status: "certified".into(),
                    progress: api::ProgressInfo { searched: scanned, total: scanned },
                },
                stats: api::StatsInfo {
                    wall_ms: started.elapsed().as_millis() as u64,
                    nodes: scanned,
                    reduction_rounds: 0,
                    field_rep: field.spec_string(),
                    image,
                },
                version: crate::version(),
            })
        }
        other => Err(Error::Unsupported(format!("unknown job kind {:?}", other))),
    }
}

/// Reduces a basis and optionally verifies the reduction predicates.
pub fn run_reduce(req: &api::ReduceRequest) -> Result<api::ReduceResponse, Error> {
    let mut basis = io::parse_basis(&req.basis_text)?;
    let params = ReductionParams {
        beta: req.beta as usize,
        delta: req.delta,
        ..ReductionParams::default()
    };
    params.validate()?;
    let rank = basis.rank()?;
    let effective = ReductionParams { beta: params.beta.clamp(2, rank.max(2)), ..params.clone() };
    if rank >= 2 {
        basis.bkz(&effective)?;
    } else {
        basis.lll(params.delta.min(0.99))?;
    }
    let predicates = if req.check {
        let mut checked = basis.clone();
        Some(api::PredicateReport {
            beta: effective.beta as u64,
            delta: params.delta,
            size_reduced: checked.is_size_reduced(1e-9)?,
            max_abs_mu: checked.max_abs_mu()?,
            lovasz: checked.lovasz_satisfied(params.delta.min(0.99), 1e-9)?,
            block_condition: checked.block_condition_satisfied(&effective, 1e-9)?,
        })
    } else {
        None
    };
    Ok(api::ReduceResponse { basis_text: io::write_basis(&basis), predicates })
}
