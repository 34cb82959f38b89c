use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgMatches, Args, Command, FromArgMatches};
use nhchain_experiments::config::OUTPUT_DIR_ENV;
use nhchain_experiments::{resolve, run, ExperimentError, RawConfig, Registry};

fn cli(registry: &Registry) -> Command {
    let mut cmd = Command::new("nhchain")
        .about("Exact-diagonalization experiments on non-Hermitian Ising chains")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(Command::new("list").about("List the available recipes"));
    for recipe in registry.iter() {
        let sub = Command::new(recipe.name()).arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .value_parser(clap::value_parser!(PathBuf))
                .help("TOML file with config keys; flags override it"),
        );
        cmd = cmd.subcommand(RawConfig::augment_args(sub).about(recipe.summary()));
    }
    cmd
}

fn execute(registry: &Registry, name: &str, matches: &ArgMatches) -> Result<(), ExperimentError> {
    let recipe = registry.get(name).ok_or_else(|| ExperimentError::UnknownRecipe(name.to_string()))?;
    let flags = RawConfig::from_arg_matches(matches).map_err(|e| ExperimentError::config("flags", e.to_string()))?;
    let file = matches.get_one::<PathBuf>("config").map(|p| RawConfig::from_file(p)).transpose()?;
    let env_output = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    let config = resolve(recipe, file.as_ref(), &flags, env_output)?;
    for path in run(recipe, &config)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let registry = Registry::builtin();
    let matches = match cli(&registry).try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    if name == "list" {
        for recipe in registry.iter() {
            println!("{:<22} {}", recipe.name(), recipe.summary());
        }
        return ExitCode::SUCCESS;
    }
    match execute(&registry, name, sub) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
