//! latdist: minimum-distance estimation for linear block codes.
//!
//! Every subcommand is a client of the HTTP service: with --server it
//! talks to a running instance, otherwise it hosts the service in-process
//! on an ephemeral local port and talks to itself.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use latdist_api as api;
use latdist_client::{Client, ClientError};

#[derive(Parser)]
#[command(
    name = "latdist",
    version,
    about = "Minimum distance of linear block codes via lattice reduction"
)]
struct Cli {
    /// URL of a running service; otherwise one is hosted in-process.
    #[arg(long, global = true)]
    server: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate (and certify) the minimum distance of a code.
    Distance(DistanceArgs),
    /// Exhaustive brute-force minimum distance.
    Oracle(OracleArgs),
    /// LLL/BKZ-reduce an integer basis file.
    Reduce(ReduceArgs),
    /// Evaluate the scaling-constant bounds.
    Bound(BoundArgs),
    /// Run the HTTP service in the foreground.
    Serve(ServeArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Matrix file (generator) or .alist file (parity-check).
    file: PathBuf,
    /// Field spec: "2", "3" or "2^6:0x43"; inferred from the file header
    /// when omitted.
    #[arg(long)]
    field: Option<String>,
    /// Compute over the binary image of a GF(2^m) code.
    #[arg(long)]
    binary_image: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_parser = ["text", "json"], default_value = "json")]
    format: String,
}

#[derive(Args)]
struct DistanceArgs {
    #[command(flatten)]
    input: InputArgs,
    /// BKZ block size (clamped to the basis rank).
    #[arg(long, default_value_t = 20)]
    beta: u64,
    /// Reduction quality in (0.5, 1].
    #[arg(long, default_value_t = 0.99)]
    delta: f64,
    /// Scaling constant N; values above 1 use the tail-augmented
    /// non-systematic embedding.
    #[arg(long, default_value_t = 1)]
    scale: u64,
    /// Worker threads for the certification enumeration.
    #[arg(long, env = "LATDIST_THREADS", default_value_t = 1)]
    threads: u64,
    /// Enumeration node cap; exceeding it yields a partial result.
    #[arg(long, default_value_t = 1u64 << 36)]
    node_budget: u64,
    /// Skip certification and report the harvested upper bound.
    #[arg(long)]
    no_certify: bool,
    /// Randomized re-reduction passes while harvesting.
    #[arg(long, default_value_t = 1)]
    harvest_rounds: u64,
    /// Certify with the enumeration radius (n+1)*r_max^2 instead of
    /// w_best - 1.
    #[arg(long)]
    full_radius: bool,
    /// Seconds between progress lines on stderr (0 disables).
    #[arg(long, default_value_t = 5)]
    progress_interval: u64,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Refuse when the message count q^k exceeds this.
    #[arg(long, default_value_t = 1u64 << 28)]
    max_messages: u64,
    /// Worker threads for the message scan.
    #[arg(long, env = "LATDIST_THREADS", default_value_t = 1)]
    threads: u64,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Args)]
struct ReduceArgs {
    /// Integer basis file (header `rows cols 0`).
    file: PathBuf,
    #[arg(long, default_value_t = 20)]
    beta: u64,
    #[arg(long, default_value_t = 0.99)]
    delta: f64,
    /// Verify and print the reduction predicates.
    #[arg(long)]
    check: bool,
    /// Write the reduced basis here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    /// Diophantine system row count m.
    #[arg(long)]
    m: u32,
    /// Diophantine system column count n.
    #[arg(long)]
    n: u32,
    /// Max column norm M.
    #[arg(long = "M", visible_alias = "max-col-norm")]
    max_col_norm: f64,
    /// Candidate norm bound r_max.
    #[arg(long)]
    rmax: f64,
    #[arg(long, default_value_t = 0.99)]
    delta: f64,
    #[arg(long, default_value_t = 2)]
    beta: u32,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Args)]
struct ServeArgs {
    /// Listen address.
    #[arg(long, default_value = "127.0.0.1:8317")]
    addr: String,
}

fn main() {
    let cli = Cli::parse();
    let code = run(cli);
    std::process::exit(code);
}

fn fail(kind: &str, exit_code: i32, message: impl std::fmt::Display) -> i32 {
    eprintln!("latdist: {} error: {}", kind, message);
    exit_code
}

fn client_error_code(err: &ClientError) -> i32 {
    match err {
        ClientError::Api(info) => info.exit_code,
        _ => api::EXIT_INTERNAL,
    }
}

fn run(cli: Cli) -> i32 {
    let runtime =
        tokio::runtime::Builder::new_multi_thread().enable_all().build().expect("tokio runtime");
    runtime.block_on(async {
        match cli.command {
            Command::Serve(args) => serve_foreground(args).await,
            command => {
                let (client, _guard) = match connect(cli.server).await {
                    Ok(pair) => pair,
                    Err(code) => return code,
                };
                match command {
                    Command::Distance(args) => cmd_distance(&client, args).await,
                    Command::Oracle(args) => cmd_oracle(&client, args).await,
                    Command::Reduce(args) => cmd_reduce(&client, args).await,
                    Command::Bound(args) => cmd_bound(&client, args).await,
                    Command::Serve(_) => unreachable!("handled above"),
                }
            }
        }
    })
}

/// Keeps the in-process service task alive for the command's lifetime.
struct ServiceGuard(#[allow(dead_code)] Option<tokio::task::JoinHandle<()>>);

async fn connect(server: Option<String>) -> Result<(Client, ServiceGuard), i32> {
    if let Some(url) = server {
        let client = Client::new(url);
        if let Err(e) = client.health().await {
            return Err(fail("connection", api::EXIT_INTERNAL, e));
        }
        return Ok((client, ServiceGuard(None)));
    }
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0")
        .await
        .map_err(|e| fail("internal", api::EXIT_INTERNAL, e))?;
    let addr = listener.local_addr().map_err(|e| fail("internal", api::EXIT_INTERNAL, e))?;
    let handle = tokio::spawn(async move {
        if let Err(e) = latdist_service::serve(listener).await {
            eprintln!("latdist: embedded service stopped: {e}");
        }
    });
    Ok((Client::new(format!("http://{addr}")), ServiceGuard(Some(handle))))
}

async fn serve_foreground(args: ServeArgs) -> i32 {
    let listener = match tokio::net::TcpListener::bind(&args.addr).await {
        Ok(l) => l,
        Err(e) => return fail("bind", api::EXIT_INTERNAL, e),
    };
    match listener.local_addr() {
        Ok(addr) => eprintln!("latdist service listening on http://{addr}"),
        Err(_) => eprintln!("latdist service listening on {}", args.addr),
    }
    tokio::select! {
        res = latdist_service::serve(listener) => match res {
            Ok(()) => 0,
            Err(e) => fail("serve", api::EXIT_INTERNAL, e),
        },
        _ = tokio::signal::ctrl_c() => 0,
    }
}

fn read_input(path: &Path) -> Result<(String, String, String), i32> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        fail("parse", api::EXIT_PARSE, format!("cannot read {}: {}", path.display(), e))
    })?;
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let format = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("alist")) {
        "alist"
    } else {
        "matrix"
    };
    Ok((name, text, format.to_string()))
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), i32> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| {
            fail("internal", api::EXIT_INTERNAL, format!("cannot write {}: {}", path.display(), e))
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| {
                    if content.ends_with('\n') {
                        Ok(())
                    } else {
                        stdout.write_all(b"\n")
                    }
                })
                .map_err(|e| fail("internal", api::EXIT_INTERNAL, e))
        }
    }
}

fn render_report(report: &api::RunReport, format: &str) -> String {
    if format == "json" {
        return serde_json::to_string_pretty(report).expect("report serializes");
    }
    let witness: Vec<String> = report.result.witness.iter().map(|s| s.to_string()).collect();
    let image = match report.stats.image {
        Some((n, k)) => format!("\nbinary image: [{}, {}]", n, k),
        None => String::new(),
    };
    format!(
        "input: {} ({}, GF({}), n={}, k={}){}\n\
         d_best = {} ({})\n\
         witness: {}\n\
         progress: {}/{} outer indices\n\
         stats: {} nodes, {} reduction rounds, {} ms\n\
         config: beta={} delta={} N={} threads={} certify={}",
        report.input.file,
        report.input.format,
        report.input.field,
        report.input.n,
        report.input.k,
        image,
        report.result.d_best,
        report.result.status,
        witness.join(" "),
        report.result.progress.searched,
        report.result.progress.total,
        report.stats.nodes,
        report.stats.reduction_rounds,
        report.stats.wall_ms,
        report.config.beta,
        report.config.delta,
        report.config.scale,
        report.config.threads,
        report.config.certify,
    )
}

async fn submit_and_wait(
    client: &Client,
    req: api::JobRequest,
    progress_interval: u64,
) -> Result<api::RunReport, i32> {
    let created = match client.submit(&req).await {
        Ok(c) => c,
        Err(e) => return Err(fail("request", client_error_code(&e), e)),
    };
    let mut last_print = Instant::now();
    let interval = Duration::from_secs(progress_interval.max(1));
    let report = client
        .wait(created.id, Duration::from_millis(50), |status| {
            if progress_interval > 0
                && status.state == "running"
                && status.progress.total > 0
                && last_print.elapsed() >= interval
            {
                eprintln!(
                    "latdist: {}: {}/{} outer indices",
                    status.stage, status.progress.searched, status.progress.total
                );
                last_print = Instant::now();
            }
        })
        .await
        .map_err(|e| fail("job", client_error_code(&e), e))?;
    Ok(report)
}

async fn cmd_distance(client: &Client, args: DistanceArgs) -> i32 {
    let (name, text, format) = match read_input(&args.input.file) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let req = api::JobRequest {
        kind: "distance".into(),
        input_name: name,
        input_text: text,
        format,
        field: args.input.field.clone(),
        binary_image: args.input.binary_image,
        config: api::JobConfig {
            beta: args.beta,
            delta: args.delta,
            scale: args.scale,
            threads: args.threads,
            node_budget: args.node_budget,
            certify: !args.no_certify,
            harvest_rounds: args.harvest_rounds,
            full_radius: args.full_radius,
            ..api::JobConfig::default()
        },
    };
    let report = match submit_and_wait(client, req, args.progress_interval).await {
        Ok(r) => r,
        Err(code) => return code,
    };
    let rendered = render_report(&report, &args.report.format);
    if let Err(code) = write_output(&args.report.out, &rendered) {
        return code;
    }
    api::exit_code_for_status(&report.result.status)
}

async fn cmd_oracle(client: &Client, args: OracleArgs) -> i32 {
    let (name, text, format) = match read_input(&args.input.file) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let req = api::JobRequest {
        kind: "oracle".into(),
        input_name: name,
        input_text: text,
        format,
        field: args.input.field.clone(),
        binary_image: args.input.binary_image,
        config: api::JobConfig {
            max_messages: args.max_messages,
            threads: args.threads,
            ..api::JobConfig::default()
        },
    };
    let report = match submit_and_wait(client, req, 5).await {
        Ok(r) => r,
        Err(code) => return code,
    };
    let rendered = render_report(&report, &args.report.format);
    if let Err(code) = write_output(&args.report.out, &rendered) {
        return code;
    }
    api::exit_code_for_status(&report.result.status)
}

async fn cmd_reduce(client: &Client, args: ReduceArgs) -> i32 {
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            return fail(
                "parse",
                api::EXIT_PARSE,
                format!("cannot read {}: {}", args.file.display(), e),
            )
        }
    };
    let req =
        api::ReduceRequest { basis_text: text, beta: args.beta, delta: args.delta, check: args.check };
    let resp = match client.reduce(&req).await {
        Ok(r) => r,
        Err(e) => return fail("reduce", client_error_code(&e), e),
    };
    if let Some(p) = &resp.predicates {
        eprintln!(
            "size-reduced: {} (max |mu| = {:.3e})\nlovasz(delta={}): {}\nblock condition (beta={}, delta^2): {}",
            if p.size_reduced { "ok" } else { "FAILED" },
            p.max_abs_mu,
            p.delta,
            if p.lovasz { "ok" } else { "FAILED" },
            p.beta,
            if p.block_condition { "ok" } else { "FAILED" },
        );
    }
    if let Err(code) = write_output(&args.out, &resp.basis_text) {
        return code;
    }
    if let Some(p) = &resp.predicates {
        if !(p.size_reduced && p.lovasz && p.block_condition) {
            return api::EXIT_INTERNAL;
        }
    }
    0
}

async fn cmd_bound(client: &Client, args: BoundArgs) -> i32 {
    let req = api::BoundRequest {
        m: args.m,
        n: args.n,
        max_col_norm: args.max_col_norm,
        r_max: args.rmax,
        delta: args.delta,
        beta: args.beta,
    };
    let resp = match client.bound(&req).await {
        Ok(r) => r,
        Err(e) => return fail("bound", client_error_code(&e), e),
    };
    let rendered = if args.report.format == "json" {
        serde_json::to_string_pretty(&resp).expect("bounds serialize")
    } else {
        format!(
            "LLL scaling bound (delta={}):  N >= {}\nBKZ scaling bound (beta={}): N >= {}\nhermite gamma_{} <= {}",
            args.delta, resp.lll_bound, args.beta, resp.bkz_bound, args.beta, resp.hermite_upper
        )
    };
    if let Err(code) = write_output(&args.report.out, &rendered) {
        return code;
    }
    0
}
