//! `healthwise`: terminal client and server launcher.

mod client;
mod output;

use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use chrono::{Local, NaiveDate};
use clap::{Args, Parser, Subcommand, ValueEnum};
use healthwise_core::barcode::{decode_image, DecodeOptions};
use healthwise_core::catalog::ProductRecord;
use healthwise_core::wire::messages::ProfileInfo;
use healthwise_core::wire::{Fault, FaultCode};
use healthwise_server::service::DecodeResponse;
use healthwise_server::{Response, ServerConfig, ServiceError};
use serde_json::{json, Value};

use client::{local_fault, CallError, Client};
use output::Style;

const DEFAULT_SERVER: &str = "http://127.0.0.1:8080";

#[derive(Parser)]
#[command(name = "healthwise", version, about = "Food barcodes, daily energy budgets and exercise suggestions")]
struct Cli {
    /// Server base URL.
    #[arg(long, global = true, env = "HW_SERVER_URL", default_value = DEFAULT_SERVER)]
    server: String,
    /// Profile id used when --user is left out.
    #[arg(long, global = true, env = "HW_USER")]
    default_user: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Human)]
    output: OutputMode,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the nutrition server in the foreground.
    Serve {
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        data_dir: Option<PathBuf>,
        /// TOML file with server settings.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    #[command(subcommand)]
    Profile(ProfileCommand),
    /// Decode a barcode from a PGM image; with --qty and --meal also check it.
    Scan {
        image: PathBuf,
        #[arg(long, requires = "qty")]
        user: Option<String>,
        #[arg(long, requires = "meal", allow_negative_numbers = true)]
        qty: Option<f64>,
        #[arg(long, requires = "qty")]
        meal: Option<String>,
        #[arg(long)]
        date: Option<NaiveDate>,
    },
    /// Show a product's nutrition facts.
    Lookup { code: String },
    /// Would this item fit today's budget?
    Check(CheckArgs),
    /// Record that an item was eaten.
    Consume(ConsumeArgs),
    /// Exercises that burn off an excess.
    Exercises {
        #[arg(long, allow_negative_numbers = true)]
        excess: i64,
    },
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Subcommand)]
enum ProfileCommand {
    Create(ProfileFields),
    /// Change some fields of a profile; the rest are kept.
    Update {
        id: String,
        #[command(flatten)]
        fields: ProfileUpdate,
    },
    Delete { id: String },
    List,
}

#[derive(Args)]
struct ProfileFields {
    #[arg(long)]
    name: String,
    #[arg(long)]
    gender: String,
    #[arg(long, allow_negative_numbers = true)]
    age: i64,
    #[arg(long = "height", alias = "height-cm")]
    height_cm: f64,
    #[arg(long = "weight", alias = "weight-kg")]
    weight_kg: f64,
    #[arg(long)]
    activity: String,
    #[arg(long)]
    email: String,
}

#[derive(Args)]
struct ProfileUpdate {
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    gender: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    age: Option<i64>,
    #[arg(long = "height", alias = "height-cm")]
    height_cm: Option<f64>,
    #[arg(long = "weight", alias = "weight-kg")]
    weight_kg: Option<f64>,
    #[arg(long)]
    activity: Option<String>,
    #[arg(long)]
    email: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    user: Option<String>,
    #[arg(long, alias = "barcode", required_unless_present = "kcal", conflicts_with = "kcal", requires = "qty")]
    code: Option<String>,
    /// Energy of the candidate item, instead of --code and --qty.
    #[arg(long, allow_negative_numbers = true)]
    kcal: Option<i64>,
    /// Grams.
    #[arg(long, allow_negative_numbers = true)]
    qty: Option<f64>,
    #[arg(long)]
    meal: String,
    /// Defaults to today.
    #[arg(long)]
    date: Option<NaiveDate>,
}

#[derive(Args)]
struct ConsumeArgs {
    #[arg(long)]
    user: Option<String>,
    #[arg(long, alias = "barcode")]
    code: String,
    #[arg(long, allow_negative_numbers = true)]
    qty: f64,
    #[arg(long)]
    meal: String,
    #[arg(long)]
    date: Option<NaiveDate>,
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Upsert every product of a JSON-lines catalog file.
    Import { file: PathBuf },
}

struct Ctx {
    server: String,
    default_user: Option<String>,
    mode: OutputMode,
    style: Style,
}

enum Outcome {
    Done(Value, String),
    Failed(CallError),
}

impl Ctx {
    fn client(&self) -> Client {
        Client::new(&self.server)
    }

    fn user(&self, given: Option<String>) -> Result<String, CallError> {
        given.or_else(|| self.default_user.clone()).ok_or_else(|| {
            local_fault(FaultCode::MissingField, "no profile given; pass --user or set HW_USER")
        })
    }

    fn respond(&self, r: Response) -> Outcome {
        Outcome::Done(r.to_json(), output::human(&r, &self.style))
    }
}

fn today(date: Option<NaiveDate>) -> String {
    date.unwrap_or_else(|| Local::now().date_naive()).to_string()
}

fn profile_fields(f: ProfileFields) -> Vec<(&'static str, String)> {
    vec![
        ("name", f.name),
        ("gender", f.gender),
        ("age", f.age.to_string()),
        ("heightCm", f.height_cm.to_string()),
        ("weightKg", f.weight_kg.to_string()),
        ("activity", f.activity),
        ("email", f.email),
    ]
}

fn merge(current: ProfileInfo, u: ProfileUpdate) -> ProfileFields {
    ProfileFields {
        name: u.name.unwrap_or(current.name),
        gender: u.gender.unwrap_or(current.gender),
        age: u.age.unwrap_or(i64::from(current.age)),
        height_cm: u.height_cm.unwrap_or(f64::from(current.height_cm)),
        weight_kg: u.weight_kg.unwrap_or(current.weight_kg),
        activity: u.activity.unwrap_or(current.activity),
        email: u.email.unwrap_or(current.email),
    }
}

fn profile(ctx: &Ctx, cmd: ProfileCommand) -> Result<Outcome, CallError> {
    let client = ctx.client();
    let r = match cmd {
        ProfileCommand::Create(f) => client.call("CreateProfile", &profile_fields(f))?,
        ProfileCommand::Update { id, fields } => {
            let Response::GetProfiles(all) = client.call("GetProfiles", &[])? else {
                unreachable!("GetProfiles answers with profiles")
            };
            let Some(current) = all.profiles.into_iter().find(|p| p.user_id == id) else {
                return Err(local_fault(FaultCode::NoSuchUser, format!("no profile with id {id}")));
            };
            let mut f = profile_fields(merge(current, fields));
            f.insert(0, ("userId", id));
            client.call("UpdateProfile", &f)?
        }
        ProfileCommand::Delete { id } => client.call("DeleteProfile", &[("userId", id)])?,
        ProfileCommand::List => client.call("GetProfiles", &[])?,
    };
    Ok(ctx.respond(r))
}

fn scan(
    ctx: &Ctx,
    image: PathBuf,
    user: Option<String>,
    check: Option<(f64, String)>,
    date: Option<NaiveDate>,
) -> Result<Outcome, CallError> {
    let bytes = std::fs::read(&image).map_err(|e| {
        local_fault(FaultCode::MalformedImage, format!("cannot read {}: {e}", image.display()))
    })?;
    let gtin = decode_image(&bytes, DecodeOptions::default())
        .map_err(|e| CallError::Fault(ServiceError::from(e).to_fault()))?;
    let decoded = DecodeResponse {
        gtin: gtin.digits13().to_string(),
        symbology: gtin.symbology(),
    };
    let Some((qty, meal)) = check else {
        let value = serde_json::to_value(&decoded).expect("decode result serializes");
        return Ok(Outcome::Done(value, format!("{}\n", decoded.gtin)));
    };
    let fields = [
        ("userId", ctx.user(user)?),
        ("date", today(date)),
        ("barcode", decoded.gtin.clone()),
        ("quantityG", qty.to_string()),
        ("meal", meal),
    ];
    let r = ctx.client().call("CheckEnergy", &fields)?;
    let text = format!("{}\n{}", decoded.gtin, output::human(&r, &ctx.style));
    Ok(Outcome::Done(json!({"scan": decoded, "check": r.to_json()}), text))
}

fn check(ctx: &Ctx, a: CheckArgs) -> Result<Outcome, CallError> {
    let mut fields = vec![("userId", ctx.user(a.user)?), ("date", today(a.date)), ("meal", a.meal)];
    match (a.code, a.kcal) {
        (Some(code), _) => {
            fields.push(("barcode", code));
            fields.push(("quantityG", a.qty.unwrap_or_default().to_string()));
        }
        (None, Some(kcal)) => fields.push(("candidateKcal", kcal.to_string())),
        (None, None) => unreachable!("clap requires --code or --kcal"),
    }
    Ok(ctx.respond(ctx.client().call("CheckEnergy", &fields)?))
}

fn consume(ctx: &Ctx, a: ConsumeArgs) -> Result<Outcome, CallError> {
    let fields = [
        ("userId", ctx.user(a.user)?),
        ("date", today(a.date)),
        ("barcode", a.code),
        ("quantityG", a.qty.to_string()),
        ("meal", a.meal),
    ];
    let r = ctx.client().call("AddConsumption", &fields)?;
    if let Response::AddConsumption(added) = &r {
        if let Some(w) = &added.warning {
            eprintln!("warning: {w}");
        }
    }
    Ok(ctx.respond(r))
}

fn import(ctx: &Ctx, file: PathBuf) -> Result<Outcome, CallError> {
    let text = std::fs::read_to_string(&file).map_err(|e| {
        local_fault(FaultCode::ValidationError, format!("cannot read {}: {e}", file.display()))
    })?;
    // Everything is checked before the first upsert is sent.
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let bad = |message: String| local_fault(FaultCode::ValidationError, format!("line {}: {message}", i + 1));
        let record: ProductRecord = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        let record = record.normalize().map_err(|e| {
            let message = format!("line {}: {e}", i + 1);
            CallError::Fault(Fault::new(ServiceError::from(e).fault_code(), message))
        })?;
        records.push(record);
    }
    let client = ctx.client();
    let (mut results, mut text) = (Vec::new(), String::new());
    for r in records {
        let fields = [
            ("barcode", r.gtin13),
            ("name", r.name),
            ("energyPer100g", r.energy_kcal_per_100g.to_string()),
            ("proteinPer100g", r.protein_g_per_100g.to_string()),
            ("fatPer100g", r.fat_g_per_100g.to_string()),
            ("carbPer100g", r.carb_g_per_100g.to_string()),
            ("servingNote", r.serving_note),
        ];
        let reply = client.call("UpsertProduct", &fields)?;
        text.push_str(&output::human(&reply, &ctx.style));
        results.push(reply.to_json());
    }
    text.push_str(&format!("imported {} products\n", results.len()));
    Ok(Outcome::Done(json!({ "imported": results }), text))
}

fn serve(port: Option<u16>, data_dir: Option<PathBuf>, config: Option<PathBuf>) -> ExitCode {
    let prepared = (|| {
        let mut cfg = match &config {
            Some(path) => ServerConfig::load(path)?,
            None => ServerConfig::default(),
        };
        cfg.apply_env(|k| std::env::var(k).ok())?;
        if let Some(p) = port {
            cfg.port = p;
        }
        if let Some(d) = data_dir {
            cfg.data_dir = d;
        }
        Ok::<_, healthwise_server::ConfigError>(cfg)
    })();
    let cfg = match prepared {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let runtime = match tokio::runtime::Builder::new_multi_thread().enable_all().build() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("error: cannot start runtime: {e}");
            return ExitCode::FAILURE;
        }
    };
    let shutdown = async {
        let _ = tokio::signal::ctrl_c().await;
        log::info!("shutting down");
    };
    match runtime.block_on(healthwise_server::serve(cfg, shutdown)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn valid_server_url(url: &str) -> bool {
    url.parse::<ureq::http::Uri>()
        .is_ok_and(|u| matches!(u.scheme_str(), Some("http" | "https")) && u.host().is_some())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if !valid_server_url(&cli.server) {
        eprintln!("error: invalid server URL {:?}; expected http://host:port", cli.server);
        return ExitCode::from(2);
    }
    let ctx = Ctx {
        server: cli.server,
        default_user: cli.default_user,
        mode: cli.output,
        style: Style {
            color: cli.output == OutputMode::Human && std::io::stdout().is_terminal(),
        },
    };
    let result = match cli.command {
        Command::Serve { port, data_dir, config } => return serve(port, data_dir, config),
        Command::Profile(cmd) => profile(&ctx, cmd),
        Command::Scan { image, user, qty, meal, date } => scan(&ctx, image, user, qty.zip(meal), date),
        Command::Lookup { code } => ctx
            .client()
            .call("GetProduct", &[("barcode", code)])
            .map(|r| ctx.respond(r)),
        Command::Check(a) => check(&ctx, a),
        Command::Consume(a) => consume(&ctx, a),
        Command::Exercises { excess } => ctx
            .client()
            .call("GetExercises", &[("excessKcal", excess.to_string())])
            .map(|r| ctx.respond(r)),
        Command::Catalog(CatalogCommand::Import { file }) => import(&ctx, file),
    };
    let outcome = result.unwrap_or_else(Outcome::Failed);
    let mut stdout = std::io::stdout().lock();
    match outcome {
        Outcome::Done(value, text) => {
            let _ = match ctx.mode {
                OutputMode::Json => writeln!(stdout, "{value}"),
                OutputMode::Human => write!(stdout, "{text}"),
            };
            ExitCode::SUCCESS
        }
        Outcome::Failed(CallError::Fault(f)) => {
            if ctx.mode == OutputMode::Json {
                let _ = writeln!(stdout, "{}", json!({"error": {"code": f.code.as_str(), "message": f.message}}));
            }
            eprintln!("{}: {}", f.code, f.message);
            ExitCode::FAILURE
        }
        Outcome::Failed(CallError::Transport(message)) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
