//! Run-configuration assembly. Precedence per field: command-line flag,
//! then `--config` file entry, then (for the tolerance) the SLABGREEN_TOL
//! environment variable, then the built-in default.

use std::collections::BTreeMap;
use std::path::Path;

use slabgreen::{RobinCondition, SlabConfig, SlabError, TruncationPolicy};
use thiserror::Error;

use crate::args::{CommonArgs, OutputFormat};

pub const ENV_TOL: &str = "SLABGREEN_TOL";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 1,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<SlabError> for CliError {
    fn from(err: SlabError) -> Self {
        match err {
            SlabError::Domain(_) | SlabError::Capacity(_) | SlabError::Validity(_) => {
                CliError::Usage(err.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

/// Wall condition as chosen on the command line or in the file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WallChoice {
    Biot(f64),
    Lambda(f64),
    Infinite,
}

/// Wall condition as written, before commitment: fig2 accepts a whole list
/// of Biot numbers where the other subcommands take exactly one wall.
#[derive(Debug, Clone, PartialEq)]
pub enum WallSpec {
    Infinite,
    Lambda(f64),
    /// Raw `--bi` text; possibly a comma-separated list.
    Biot(String),
    Unset,
}

/// Fully resolved run parameters, before the wall choice is committed to a
/// concrete slab (fig2 sweeps several walls over one geometry).
#[derive(Debug)]
pub struct Resolved {
    pub thickness: f64,
    pub kappa: f64,
    pub wall: WallSpec,
    pub policy: TruncationPolicy,
    pub format: OutputFormat,
}

impl Resolved {
    /// The single wall choice, defaulting to Bi = 1.
    pub fn single_wall(&self) -> Result<WallChoice, CliError> {
        match &self.wall {
            WallSpec::Infinite => Ok(WallChoice::Infinite),
            WallSpec::Lambda(lambda) => Ok(WallChoice::Lambda(*lambda)),
            WallSpec::Biot(text) if text.contains(',') => Err(CliError::Usage(format!(
                "expected a single Biot number, got a list: {text}"
            ))),
            WallSpec::Biot(text) => parse_wall_token(text),
            WallSpec::Unset => Ok(WallChoice::Biot(1.0)),
        }
    }

    /// The Biot sweep for fig2: lowercase tags paired with wall choices.
    pub fn wall_list(&self, fallback: &str) -> Result<Vec<(String, WallChoice)>, CliError> {
        let text = match &self.wall {
            WallSpec::Biot(text) => text.clone(),
            WallSpec::Unset => fallback.to_string(),
            _ => {
                return Err(CliError::Usage(
                    "this subcommand sweeps Biot numbers; choose them with --bi".into(),
                ))
            }
        };
        text.split(',')
            .map(|tok| {
                let tag = tok.trim().to_ascii_lowercase();
                parse_wall_token(&tag).map(|wall| (tag, wall))
            })
            .collect()
    }

    /// The slab for the resolved wall choice.
    pub fn slab(&self) -> Result<SlabConfig, CliError> {
        self.slab_for(self.single_wall()?)
    }

    pub fn slab_for(&self, wall: WallChoice) -> Result<SlabConfig, CliError> {
        let cfg = match wall {
            WallChoice::Biot(bi) => SlabConfig::from_biot(self.thickness, self.kappa, bi),
            WallChoice::Lambda(lambda) => SlabConfig::new(
                self.thickness,
                self.kappa,
                RobinCondition::Finite(lambda),
            ),
            WallChoice::Infinite => SlabConfig::new(
                self.thickness,
                self.kappa,
                RobinCondition::DirichletInfinite,
            ),
        };
        cfg.map_err(CliError::from)
    }
}

pub fn resolve(common: &CommonArgs) -> Result<Resolved, CliError> {
    let file = match &common.config {
        Some(path) => parse_config_file(path)?,
        None => BTreeMap::new(),
    };

    let thickness = pick_f64(common.thickness, &file, "thickness")?.unwrap_or(1.0);
    let kappa = pick_f64(common.kappa, &file, "kappa")?.unwrap_or(1.0);

    let tol = match pick_f64(common.tol, &file, "tol")? {
        Some(tol) => tol,
        None => match std::env::var(ENV_TOL) {
            Ok(text) => parse_f64(&text, ENV_TOL)?,
            Err(_) => 1e-10,
        },
    };
    let n_max = match common.n_max {
        Some(n) => n,
        None => match file.get("n_max") {
            Some(text) => text
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("config n_max is not an integer: {text}")))?,
            None => 64,
        },
    };
    let safety = pick_f64(common.safety, &file, "safety")?.unwrap_or(2.0);
    let policy = TruncationPolicy {
        abs_tol: tol,
        n_max,
        safety,
    };
    policy.validate()?;

    let format = match common.format {
        Some(f) => f,
        None => match file.get("format").map(String::as_str) {
            Some("csv") => OutputFormat::Csv,
            Some("json") => OutputFormat::Json,
            Some(other) => {
                return Err(CliError::Usage(format!(
                    "config format must be csv or json, not {other}"
                )))
            }
            None => OutputFormat::Csv,
        },
    };

    let wall = resolve_wall(common, &file)?;
    Ok(Resolved {
        thickness,
        kappa,
        wall,
        policy,
        format,
    })
}

fn resolve_wall(
    common: &CommonArgs,
    file: &BTreeMap<String, String>,
) -> Result<WallSpec, CliError> {
    // Flags first (clap already rejects contradictory combinations).
    if let Some(text) = &common.robin {
        if text != "inf" {
            return Err(CliError::Usage(format!(
                "--robin accepts only \"inf\"; finite walls use --bi or --lambda, got {text}"
            )));
        }
        return Ok(WallSpec::Infinite);
    }
    if let Some(lambda) = common.lambda {
        return Ok(WallSpec::Lambda(lambda));
    }
    if let Some(text) = &common.bi {
        return Ok(WallSpec::Biot(text.clone()));
    }

    // Then the file; reject ambiguity instead of inventing a precedence.
    let file_keys: Vec<&str> = ["bi", "lambda", "robin"]
        .into_iter()
        .filter(|k| file.contains_key(*k))
        .collect();
    if file_keys.len() > 1 {
        return Err(CliError::Usage(format!(
            "config file sets {} together; choose one wall key",
            file_keys.join(" and ")
        )));
    }
    if let Some(text) = file.get("robin") {
        if text != "inf" {
            return Err(CliError::Usage(format!(
                "config robin accepts only \"inf\", got {text}"
            )));
        }
        return Ok(WallSpec::Infinite);
    }
    if let Some(text) = file.get("lambda") {
        return Ok(WallSpec::Lambda(parse_f64(text, "lambda")?));
    }
    if let Some(text) = file.get("bi") {
        return Ok(WallSpec::Biot(text.clone()));
    }
    Ok(WallSpec::Unset)
}

/// One Biot token: a positive number or "inf".
pub fn parse_wall_token(text: &str) -> Result<WallChoice, CliError> {
    let trimmed = text.trim();
    if trimmed.eq_ignore_ascii_case("inf") {
        return Ok(WallChoice::Infinite);
    }
    Ok(WallChoice::Biot(parse_f64(trimmed, "Biot number")?))
}

pub fn parse_f64(text: &str, what: &str) -> Result<f64, CliError> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Usage(format!("{what} is not a number: {text}")))
}

pub fn parse_f64_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let values: Result<Vec<f64>, CliError> =
        text.split(',').map(|tok| parse_f64(tok, what)).collect();
    let values = values?;
    if values.is_empty() {
        return Err(CliError::Usage(format!("{what} lists at least one value")));
    }
    Ok(values)
}

const CONFIG_KEYS: [&str; 9] = [
    "thickness", "kappa", "bi", "lambda", "robin", "tol", "n_max", "safety", "format",
];

fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "{}:{}: expected key = value, got {line}",
                path.display(),
                lineno + 1
            )));
        };
        let key = key.trim().to_string();
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!(
                "{}:{}: unknown key {key}",
                path.display(),
                lineno + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn pick_f64(
    flag: Option<f64>,
    file: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<f64>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        Some(text) => parse_f64(text, key).map(Some),
        None => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn bare_args() -> CommonArgs {
        CommonArgs {
            thickness: None,
            kappa: None,
            bi: None,
            lambda: None,
            robin: None,
            tol: None,
            n_max: None,
            safety: None,
            config: None,
            format: None,
        }
    }

    #[test]
    fn wall_tokens_cover_numbers_and_the_infinite_spelling() {
        assert_eq!(parse_wall_token("10").unwrap(), WallChoice::Biot(10.0));
        assert_eq!(parse_wall_token(" inf ").unwrap(), WallChoice::Infinite);
        assert_eq!(parse_wall_token("INF").unwrap(), WallChoice::Infinite);
        let err = parse_wall_token("warm").unwrap_err();
        println!("token diagnostic: {err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn defaults_fill_in_when_nothing_is_given() {
        let resolved = resolve(&bare_args()).unwrap();
        assert_eq!(resolved.thickness, 1.0);
        assert_eq!(resolved.kappa, 1.0);
        assert_eq!(resolved.policy.n_max, 64);
        assert_eq!(resolved.single_wall().unwrap(), WallChoice::Biot(1.0));
    }

    #[test]
    fn single_wall_refuses_a_biot_list() {
        let resolved = Resolved {
            thickness: 1.0,
            kappa: 1.0,
            wall: WallSpec::Biot("1,10".into()),
            policy: TruncationPolicy::default(),
            format: OutputFormat::Csv,
        };
        let err = resolved.single_wall().unwrap_err();
        println!("list diagnostic: {err}");
        assert_eq!(err.exit_code(), 2);
        assert_eq!(resolved.wall_list("unused").unwrap().len(), 2);
    }

    #[test]
    fn sweep_list_falls_back_and_rejects_non_biot_walls() {
        let mut resolved = Resolved {
            thickness: 1.0,
            kappa: 1.0,
            wall: WallSpec::Unset,
            policy: TruncationPolicy::default(),
            format: OutputFormat::Csv,
        };
        let sweep = resolved.wall_list("inf,0.5").unwrap();
        assert_eq!(sweep[0], ("inf".to_string(), WallChoice::Infinite));
        assert_eq!(sweep[1], ("0.5".to_string(), WallChoice::Biot(0.5)));

        resolved.wall = WallSpec::Lambda(3.0);
        assert_eq!(resolved.wall_list("inf").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn config_files_skip_comments_and_reject_unknown_keys() {
        let mut good = tempfile::NamedTempFile::new().unwrap();
        writeln!(good, "# geometry").unwrap();
        writeln!(good).unwrap();
        writeln!(good, "thickness = 2.5").unwrap();
        writeln!(good, "format = json").unwrap();
        let map = parse_config_file(good.path()).unwrap();
        assert_eq!(map.get("thickness").map(String::as_str), Some("2.5"));
        assert_eq!(map.len(), 2);

        let mut bad = tempfile::NamedTempFile::new().unwrap();
        writeln!(bad, "porosity = 0.3").unwrap();
        let err = parse_config_file(bad.path()).unwrap_err();
        println!("config diagnostic: {err}");
        assert_eq!(err.exit_code(), 2);

        let mut torn = tempfile::NamedTempFile::new().unwrap();
        writeln!(torn, "thickness").unwrap();
        assert_eq!(parse_config_file(torn.path()).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn file_walls_must_be_unambiguous() {
        let mut fixture = tempfile::NamedTempFile::new().unwrap();
        writeln!(fixture, "bi = 2").unwrap();
        writeln!(fixture, "lambda = 4").unwrap();
        let mut args = bare_args();
        args.config = Some(fixture.path().to_path_buf());
        let err = resolve(&args).unwrap_err();
        println!("ambiguity diagnostic: {err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn flags_shadow_file_entries() {
        let mut fixture = tempfile::NamedTempFile::new().unwrap();
        writeln!(fixture, "thickness = 9").unwrap();
        writeln!(fixture, "bi = 9").unwrap();
        let mut args = bare_args();
        args.config = Some(fixture.path().to_path_buf());
        args.thickness = Some(2.0);
        args.bi = Some("0.25".into());
        let resolved = resolve(&args).unwrap();
        assert_eq!(resolved.thickness, 2.0);
        assert_eq!(resolved.single_wall().unwrap(), WallChoice::Biot(0.25));
    }

    #[test]
    fn error_kinds_map_onto_the_documented_exit_codes() {
        assert_eq!(CliError::Usage("u".into()).exit_code(), 2);
        assert_eq!(CliError::Validation("v".into()).exit_code(), 1);
        assert_eq!(CliError::Numerical("n".into()).exit_code(), 3);
        assert_eq!(CliError::Io("i".into()).exit_code(), 3);
        let domain: CliError = SlabError::Domain("bad".into()).into();
        assert_eq!(domain.exit_code(), 2);
        let precision: CliError = SlabError::PrecisionLoss("lost".into()).into();
        assert_eq!(precision.exit_code(), 3);
    }
}
