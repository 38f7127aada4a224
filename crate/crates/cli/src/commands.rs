use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;
use slfnet::dataset::{Dataset, GenConfig};
use slfnet::floorplan::load_plan;
use slfnet::net::{Checkpoint, InputScaling, NetParams};
use slfnet::predict::{baseline_map, evaluate, pathloss_map, predict_islf};
use slfnet::raster::Grid;
use slfnet::train::{split_holdout, train_with_meta, RunConfig};
use slfnet::{CartesianPair, Error, LinkBudget, Result, WeightModel};

use crate::{BudgetArgs, Command, GenDataArgs, GridSpec, MapArgs, TrainArgs};

/// One-line JSON error record for stderr.
pub fn error_line(kind: &str, message: &str) -> String {
    json!({ "error": kind, "message": message }).to_string()
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Rasterize {
            plan,
            cell_size,
            out,
        } => {
            let raster = load_plan(&plan)?.rasterize(cell_size)?;
            raster.export(&out, "slf", "slf_db_per_m", "dB/m", None)?;
            eprintln!(
                "wrote {}x{} raster to {}",
                raster.grid.nx,
                raster.grid.ny,
                out.display()
            );
            Ok(())
        }
        Command::GenData(args) => gen_data(args),
        Command::Train(args) => train(args),
        Command::Predict {
            ckpt,
            tx,
            rx,
            budget,
            clamp,
        } => {
            let ck = Checkpoint::load(&ckpt)?;
            let budget = resolve_budget(&budget, &ck)?;
            let pair = CartesianPair::new(tx, rx)?;
            let islf = predict_islf(&ck.params, &pair, clamp)?;
            let rssi = budget.free_space(pair.separation()) - islf;
            println!("islf_db={islf} rssi_dbm={rssi}");
            Ok(())
        }
        Command::Map { ckpt, map, clamp } => {
            let ck = Checkpoint::load(&ckpt)?;
            let budget = resolve_budget(&map.budget, &ck)?;
            let raster = pathloss_map(&ck.params, &budget, map.tx, &grid(map.grid)?, clamp)?;
            export_map(&raster, &map, "rssi_map")
        }
        Command::BaselineMap { plan, map } => {
            let plan = load_plan(&plan)?;
            let budget = LinkBudget::new(
                map.budget.g0.unwrap_or(LinkBudget::default().g0),
                map.budget.gamma.unwrap_or(LinkBudget::default().gamma),
            )?;
            let raster = baseline_map(&plan, &budget, map.tx, &grid(map.grid)?)?;
            export_map(&raster, &map, "baseline_map")
        }
        Command::Eval { ckpt, data } => {
            let ck = Checkpoint::load(&ckpt)?;
            let data = Dataset::load(&data)?;
            let m = evaluate(&ck.params, &data.islf_samples)?;
            println!("{}", serde_json::to_string(&m).expect("metrics serialize"));
            Ok(())
        }
    }
}

fn grid(spec: GridSpec) -> Result<Grid> {
    Grid::new(spec.origin, spec.cell_size, spec.nx, spec.ny)
}

fn export_map(raster: &slfnet::raster::Raster, map: &MapArgs, stem: &str) -> Result<()> {
    raster.export(&map.out, stem, "rssi_dbm", "dBm", map.window)?;
    eprintln!(
        "wrote {}x{} map to {}",
        raster.grid.nx,
        raster.grid.ny,
        map.out.display()
    );
    Ok(())
}

/// Flags first, then the dataset budget recorded in the checkpoint, then defaults.
fn resolve_budget(args: &BudgetArgs, ck: &Checkpoint) -> Result<LinkBudget> {
    let stored: LinkBudget = ck
        .meta
        .get("data")
        .and_then(|d| d.get("budget"))
        .and_then(|b| serde_json::from_value(b.clone()).ok())
        .unwrap_or_default();
    LinkBudget::new(
        args.g0.unwrap_or(stored.g0),
        args.gamma.unwrap_or(stored.gamma),
    )
}

fn gen_data(args: GenDataArgs) -> Result<()> {
    let plan = load_plan(&args.plan)?;
    let weight = match args.weight {
        crate::WeightArg::Line => WeightModel::line(),
        crate::WeightArg::Nesh => WeightModel::nesh(args.nesh_exponent)?,
    };
    debug_assert_eq!(weight.kind, args.weight.into());
    let config = GenConfig {
        n_slf: args.n_slf,
        n_islf: args.n_islf,
        in_wall_fraction: args.in_wall_fraction,
        noise_sigma: args.noise_sigma,
        weight,
        budget: LinkBudget::new(args.g0, args.gamma)?,
        seed: args.seed,
    };
    let data = Dataset::generate(&plan, &config)?;
    data.save(&args.out)?;
    eprintln!(
        "wrote {} SLF and {} ISLF samples to {}",
        data.slf_samples.len(),
        data.islf_samples.len(),
        args.out.display()
    );
    Ok(())
}

fn read_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    toml::from_str(&text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start].matches('\n').count() + 1)
            .unwrap_or(0);
        Error::Parse {
            path: path.to_path_buf(),
            line,
            message: e.message().to_string(),
        }
    })
}

pub fn defaults_toml() -> String {
    toml::to_string(&RunConfig::default()).expect("default config serializes")
}

fn train(args: TrainArgs) -> Result<()> {
    if args.print_defaults {
        print!("{}", defaults_toml());
        return Ok(());
    }
    let (Some(data_dir), Some(out)) = (args.data, args.out) else {
        unreachable!("clap enforces --data and --out");
    };
    let mut config = match &args.config {
        Some(path) => read_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = args.steps {
        config.train.steps = v;
    }
    if let Some(v) = args.seed {
        config.train.seed = v;
    }
    if let Some(v) = args.init_seed {
        config.init_seed = v;
    }
    if let Some(v) = args.learning_rate {
        config.train.learning_rate = v;
    }
    if let Some(v) = args.lambda_islf {
        config.loss.lambda_islf = v;
    }
    if let Some(v) = args.eval_every {
        config.train.eval_every = v;
    }
    config.train.checkpoint_path = Some(out.clone());
    config.validate()?;

    let data = Dataset::load(&data_dir)?;
    let (train_set, holdout) = split_holdout(&data, config.holdout_fraction);
    let params = NetParams::init(
        &config.net,
        InputScaling::for_region(&data.meta.region),
        config.init_seed,
    )?;
    let mut recorded = config.clone();
    recorded.train.checkpoint_path = None;
    let extra = json!({ "config": recorded, "data": data.meta });
    let (_, report) = train_with_meta(
        &train_set,
        &holdout,
        params,
        &config.loss,
        &config.train,
        &extra,
    )?;
    for r in &report.records {
        eprintln!(
            "step {} slf {:.6e} islf {:.6e} total {:.6e} holdout_nmse {:.6e}",
            r.step, r.slf_loss, r.islf_loss, r.total, r.holdout_nmse
        );
    }
    let report_path = args.report.unwrap_or_else(|| {
        let mut p = out.clone().into_os_string();
        p.push(".report.csv");
        PathBuf::from(p)
    });
    fs::write(&report_path, report.to_csv()).map_err(|e| Error::Io {
        path: report_path.clone(),
        source: e,
    })?;
    Ok(())
}
