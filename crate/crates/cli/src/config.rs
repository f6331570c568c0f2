//! Flat `key = value` run configuration.
//!
//! A config file holds one `key = value` pair per line; `#` starts a comment.
//! Command-line flags `--key value` (or `--key=value`) override the file.
//! Every experiment has its own key set: unknown keys and missing required
//! keys are errors, and each error names the line or flag it came from.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qtraj::dynamics::WidthVariant;
use qtraj::experiments::{
    BarrierTime, BrownianConfig, DiffractionConfig, EarlyArrivalsConfig, ExperimentKind, ScanParameter, ScanSpec,
    TunnelingConfig,
};
use qtraj::potential::DrivenField;
use qtraj::{Friction, SystemParams};

/// Where a value came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Line { file: PathBuf, line: usize },
    Flag(String),
    Default,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Line { file, line } => write!(f, "{}:{line}", file.display()),
            Source::Flag(name) => write!(f, "flag --{name}"),
            Source::Default => f.write_str("default"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("{at}: malformed line `{text}` (expected `key = value`)")]
    Malformed { at: Source, text: String },
    #[error("{at}: unknown key `{key}` for {experiment} (expected keys: {expected})")]
    UnknownKey {
        at: Source,
        key: String,
        experiment: ExperimentKind,
        expected: String,
    },
    #[error("{at}: key `{key}` given twice")]
    Duplicate { at: Source, key: String },
    #[error("missing required keys for {experiment}: {missing} (expected keys: {expected})")]
    Missing {
        experiment: ExperimentKind,
        missing: String,
        expected: String,
    },
    #[error("{at}: `{key} = {value}`: {reason}")]
    BadValue {
        at: Source,
        key: String,
        value: String,
        reason: String,
    },
    #[error("flag --{0} needs a value")]
    FlagWithoutValue(String),
    #[error("unexpected argument `{0}`")]
    UnexpectedArgument(String),
    #[error("cannot read {path}: {reason}")]
    Unreadable { path: PathBuf, reason: String },
}

/// Worker pool size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Fixed(usize),
}

impl fmt::Display for Threads {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threads::Auto => f.write_str("auto"),
            Threads::Fixed(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for Threads {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(Threads::Auto);
        }
        match s.parse::<usize>() {
            Ok(0) | Err(_) => Err("expected a positive integer or `auto`".into()),
            Ok(n) => Ok(Threads::Fixed(n)),
        }
    }
}

/// Typed configuration of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentConfig {
    Brownian(BrownianConfig),
    Diffraction(DiffractionConfig),
    Tunneling(TunnelingConfig),
    EarlyArrivals(EarlyArrivalsConfig),
}

/// A validated run: the typed experiment config plus the resolved key/value
/// pairs it was built from, in canonical key order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub kind: ExperimentKind,
    pub experiment: ExperimentConfig,
    pub seed: u64,
    pub threads: Threads,
    pub out: PathBuf,
    pub entries: Vec<(String, String)>,
}

struct Key {
    name: &'static str,
    /// `None` marks a required key.
    default: Option<&'static str>,
}

const fn req(name: &'static str) -> Key {
    Key { name, default: None }
}

const fn opt(name: &'static str, default: &'static str) -> Key {
    Key {
        name,
        default: Some(default),
    }
}

const COMMON: &[Key] = &[
    opt("seed", "0"),
    opt("threads", "auto"),
    opt("out", "runs"),
    opt("mass", "1"),
    opt("hbar", "1"),
    opt("epsilon", "1"),
];

const BROWNIAN: &[Key] = &[
    req("gamma_r"),
    req("kT"),
    opt("gamma_i", "0"),
    opt("width", "kostin_scaled"),
    opt("sigma0", "1"),
    opt("sigma_dot0", "0"),
    opt("n_tra", "10000"),
    opt("t_end", "100"),
    opt("dt", "0.01"),
    opt("record_every", "100"),
];

const DIFFRACTION: &[Key] = &[
    req("p"),
    req("x_obs"),
    opt("gamma_r", "0"),
    opt("t_end", "40"),
    opt("dt", "0.01"),
    opt("record_every", "1"),
];

const TUNNELING: &[Key] = &[
    req("omega"),
    opt("gamma_r", "0"),
    opt("width", "kostin_scaled"),
    opt("charge", "-1"),
    opt("e0", "0"),
    opt("omega0", "0"),
    opt("phi", "0"),
    opt("x0", "-10"),
    opt("p0", "1"),
    opt("sigma0", "1"),
    opt("scan", "none"),
    opt("scan_lo", "auto"),
    opt("scan_hi", "auto"),
    opt("scan_points", "61"),
    opt("t_end", "150"),
    opt("dt", "0.001"),
    opt("record_every", "100"),
];

const EARLY_ARRIVALS: &[Key] = &[
    req("gamma_r"),
    req("kT"),
    opt("gamma_i", "0"),
    opt("omega", "1.5"),
    opt("g", "1"),
    opt("t_barrier", "3*t_b"),
    opt("x_d", "5"),
    opt("q0", "-5"),
    opt("q_dot0", "0"),
    opt("sigma0", "1"),
    opt("sigma_dot0", "0"),
    opt("n_tra", "10000"),
    opt("t_end", "60"),
    opt("dt", "0.01"),
    opt("record_every", "10"),
];

fn keys_for(kind: ExperimentKind) -> Vec<&'static Key> {
    let own = match kind {
        ExperimentKind::Brownian => BROWNIAN,
        ExperimentKind::Diffraction => DIFFRACTION,
        ExperimentKind::Tunneling => TUNNELING,
        ExperimentKind::EarlyArrivals => EARLY_ARRIVALS,
    };
    COMMON.iter().chain(own).collect()
}

/// Keys accepted by `kind`, required ones first within each group.
pub fn expected_keys(kind: ExperimentKind) -> Vec<&'static str> {
    keys_for(kind).iter().map(|k| k.name).collect()
}

/// Keys `kind` cannot run without.
pub fn required_keys(kind: ExperimentKind) -> Vec<&'static str> {
    keys_for(kind).iter().filter(|k| k.default.is_none()).map(|k| k.name).collect()
}

/// Raw `key = value` pairs with their sources. Later layers override earlier
/// ones; within one layer a repeated key is an error.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    values: BTreeMap<String, (String, Source)>,
}

impl RawConfig {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parse config text. `file` is only used in error messages.
    pub fn parse_text(text: &str, file: &Path) -> Result<Self, ConfigError> {
        let mut raw = Self::new();
        for (i, line) in text.lines().enumerate() {
            let source = Source::Line {
                file: file.to_path_buf(),
                line: i + 1,
            };
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                return Err(ConfigError::Malformed {
                    at: source,
                    text: line.trim().to_string(),
                });
            };
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() || k.contains(char::is_whitespace) {
                return Err(ConfigError::Malformed {
                    at: source,
                    text: line.trim().to_string(),
                });
            }
            if raw.values.contains_key(k) {
                return Err(ConfigError::Duplicate {
                    at: source,
                    key: k.to_string(),
                });
            }
            raw.values.insert(k.to_string(), (v.to_string(), source));
        }
        Ok(raw)
    }

    pub fn read_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Unreadable {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        Self::parse_text(&text, path)
    }

    /// Set a value from a command-line flag, overriding any earlier value.
    pub fn set_flag(&mut self, key: &str, value: &str) {
        self.values
            .insert(key.to_string(), (value.to_string(), Source::Flag(key.to_string())));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|(v, _)| v.as_str())
    }

    /// Resolve against the key set of `kind`.
    pub fn resolve(&self, kind: ExperimentKind) -> Result<RunConfig, ConfigError> {
        let keys = keys_for(kind);
        let expected = expected_keys(kind).join(", ");
        for (k, (v, source)) in &self.values {
            if k == "experiment" {
                if ExperimentKind::from_name(v) != Some(kind) {
                    return Err(ConfigError::BadValue {
                        at: source.clone(),
                        key: k.clone(),
                        value: v.clone(),
                        reason: format!("this config is for another experiment than {kind}"),
                    });
                }
                continue;
            }
            if !keys.iter().any(|key| key.name == k) {
                return Err(ConfigError::UnknownKey {
                    at: source.clone(),
                    key: k.clone(),
                    experiment: kind,
                    expected: expected.clone(),
                });
            }
        }
        let missing: Vec<_> = keys
            .iter()
            .filter(|k| k.default.is_none() && !self.values.contains_key(k.name))
            .map(|k| k.name)
            .collect();
        if !missing.is_empty() {
            return Err(ConfigError::Missing {
                experiment: kind,
                missing: missing.join(", "),
                expected,
            });
        }
        let resolved = Resolved {
            values: keys
                .iter()
                .map(|k| {
                    let (v, s) = match self.values.get(k.name) {
                        Some((v, s)) => (v.clone(), s.clone()),
                        None => (k.default.unwrap_or_default().to_string(), Source::Default),
                    };
                    (k.name, (v, s))
                })
                .collect(),
        };
        let experiment = match kind {
            ExperimentKind::Brownian => ExperimentConfig::Brownian(resolved.brownian()?),
            ExperimentKind::Diffraction => ExperimentConfig::Diffraction(resolved.diffraction()?),
            ExperimentKind::Tunneling => ExperimentConfig::Tunneling(resolved.tunneling()?),
            ExperimentKind::EarlyArrivals => ExperimentConfig::EarlyArrivals(resolved.early_arrivals()?),
        };
        let mut entries = vec![("experiment".to_string(), kind.name().to_string())];
        entries.extend(
            keys.iter()
                .map(|k| (k.name.to_string(), resolved.values[k.name].0.clone())),
        );
        Ok(RunConfig {
            kind,
            experiment,
            seed: resolved.parse("seed")?,
            threads: resolved.parse("threads")?,
            out: PathBuf::from(resolved.str("out")),
            entries,
        })
    }
}

struct Resolved {
    values: BTreeMap<&'static str, (String, Source)>,
}

impl Resolved {
    fn str(&self, key: &str) -> &str {
        &self.values[key].0
    }

    fn bad(&self, key: &str, reason: impl Into<String>) -> ConfigError {
        let (value, source) = &self.values[key];
        ConfigError::BadValue {
            at: source.clone(),
            key: key.to_string(),
            value: value.clone(),
            reason: reason.into(),
        }
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.str(key).parse().map_err(|e: T::Err| self.bad(key, e.to_string()))
    }

    fn f64(&self, key: &str) -> Result<f64, ConfigError> {
        let v: f64 = self.parse(key)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.bad(key, "must be a finite number"))
        }
    }

    /// Run a core constructor, blaming `key` for its error.
    fn check<T>(&self, key: &str, r: qtraj::Result<T>) -> Result<T, ConfigError> {
        r.map_err(|e| self.bad(key, e.to_string()))
    }

    fn params(&self) -> Result<SystemParams, ConfigError> {
        let (m, h, eps) = (self.f64("mass")?, self.f64("hbar")?, self.f64("epsilon")?);
        SystemParams::new(m, h, eps).map_err(|e| {
            let key = match &e {
                qtraj::Error::InvalidParameter { name, .. } => name,
                _ => "epsilon",
            };
            self.bad(key, e.to_string())
        })
    }

    fn friction(&self, with_imaginary: bool) -> Result<Friction, ConfigError> {
        let gr = self.f64("gamma_r")?;
        let gi = if with_imaginary { self.f64("gamma_i")? } else { 0.0 };
        if gr < 0.0 {
            return Err(self.bad("gamma_r", "must be nonnegative"));
        }
        self.check("gamma_i", Friction::new(gr, gi))
    }

    fn kt(&self) -> Result<f64, ConfigError> {
        let kt = self.f64("kT")?;
        if kt < 0.0 {
            return Err(self.bad("kT", "must be nonnegative"));
        }
        Ok(kt)
    }

    fn positive(&self, key: &str) -> Result<f64, ConfigError> {
        let v = self.f64(key)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(self.bad(key, "must be positive"))
        }
    }

    fn count(&self, key: &str) -> Result<usize, ConfigError> {
        match self.parse::<usize>(key)? {
            0 => Err(self.bad(key, "must be at least 1")),
            n => Ok(n),
        }
    }

    fn variant(&self) -> Result<WidthVariant, ConfigError> {
        self.parse("width")
    }

    fn brownian(&self) -> Result<BrownianConfig, ConfigError> {
        Ok(BrownianConfig {
            params: self.params()?,
            friction: self.friction(true)?,
            kt: self.kt()?,
            variant: self.variant()?,
            sigma0: self.positive("sigma0")?,
            sigma_dot0: self.f64("sigma_dot0")?,
            t_end: self.positive("t_end")?,
            dt: self.positive("dt")?,
            record_every: self.count("record_every")?,
            n_tra: self.count("n_tra")?,
            seed: self.parse("seed")?,
        })
    }

    fn diffraction(&self) -> Result<DiffractionConfig, ConfigError> {
        let gamma = self.f64("gamma_r")?;
        if gamma < 0.0 {
            return Err(self.bad("gamma_r", "must be nonnegative"));
        }
        Ok(DiffractionConfig {
            params: self.params()?,
            gamma,
            p: self.positive("p")?,
            x_obs: self.f64("x_obs")?,
            t_end: self.positive("t_end")?,
            dt: self.positive("dt")?,
            record_every: self.count("record_every")?,
        })
    }

    fn tunneling(&self) -> Result<TunnelingConfig, ConfigError> {
        let omega = self.positive("omega")?;
        let variant = self.variant()?;
        if !matches!(variant, WidthVariant::KostinScaled | WidthVariant::CkScaled) {
            return Err(self.bad("width", "tunnelling supports kostin_scaled and ck_scaled"));
        }
        let x0 = self.f64("x0")?;
        if x0 >= 0.0 {
            return Err(self.bad("x0", "the packet must start left of the barrier top (x0 < 0)"));
        }
        let scan = match self.str("scan") {
            "none" => None,
            _ => {
                let param: ScanParameter = self.parse("scan")?;
                let bound = |key: &str, fallback: Option<f64>| match (self.str(key), fallback) {
                    ("auto", Some(v)) => Ok(v),
                    ("auto", None) => Err(self.bad(key, format!("required when scanning {param}"))),
                    _ => self.f64(key),
                };
                let default = ScanSpec::resonance(omega);
                let omega0 = param == ScanParameter::Omega0;
                let scan = ScanSpec {
                    param,
                    lo: bound("scan_lo", omega0.then_some(default.lo))?,
                    hi: bound("scan_hi", omega0.then_some(default.hi))?,
                    points: self.count("scan_points")?,
                };
                self.check("scan_hi", scan.values())?;
                Some(scan)
            }
        };
        let gamma = self.f64("gamma_r")?;
        if gamma < 0.0 {
            return Err(self.bad("gamma_r", "must be nonnegative"));
        }
        Ok(TunnelingConfig {
            params: self.params()?,
            gamma,
            variant,
            field: DrivenField {
                charge: self.f64("charge")?,
                e0: self.f64("e0")?,
                omega0: self.f64("omega0")?,
                phi: self.f64("phi")?,
                omega,
            },
            x0,
            p0: self.f64("p0")?,
            sigma0: self.positive("sigma0")?,
            t_end: self.positive("t_end")?,
            dt: self.positive("dt")?,
            record_every: self.count("record_every")?,
            scan,
        })
    }

    fn barrier_time(&self) -> Result<BarrierTime, ConfigError> {
        let s = self.str("t_barrier");
        if s == "free_path" {
            return Ok(BarrierTime::FreePath);
        }
        if let Some(k) = s.strip_suffix("t_b") {
            let k = k.trim().trim_end_matches('*').trim();
            let k = if k.is_empty() { Ok(1.0) } else { k.parse::<f64>() };
            return match k {
                Ok(k) if k.is_finite() => Ok(BarrierTime::MultipleOfTb(k)),
                _ => Err(self.bad("t_barrier", "expected a number, `free_path` or `<k>*t_b`")),
            };
        }
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(BarrierTime::Value)
            .ok_or_else(|| self.bad("t_barrier", "expected a number, `free_path` or `<k>*t_b`"))
    }

    fn early_arrivals(&self) -> Result<EarlyArrivalsConfig, ConfigError> {
        let g = self.f64("g")?;
        if g < 0.0 {
            return Err(self.bad("g", "must be nonnegative"));
        }
        let cfg = EarlyArrivalsConfig {
            params: self.params()?,
            friction: self.friction(true)?,
            kt: self.kt()?,
            omega: self.f64("omega")?,
            g,
            barrier_time: self.barrier_time()?,
            x_d: self.f64("x_d")?,
            q0: self.f64("q0")?,
            q_dot0: self.f64("q_dot0")?,
            sigma0: self.positive("sigma0")?,
            sigma_dot0: self.f64("sigma_dot0")?,
            t_end: self.positive("t_end")?,
            dt: self.positive("dt")?,
            record_every: self.count("record_every")?,
            n_tra: self.count("n_tra")?,
            seed: self.parse("seed")?,
        };
        self.check("t_barrier", cfg.resolve_barrier_time())?;
        Ok(cfg)
    }
}

/// Build a run from command-line arguments following the subcommand:
/// `[--config <file>] [--<key> <value> | --<key>=<value>]...`.
pub fn parse_args<I, S>(kind: ExperimentKind, args: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let args: Vec<String> = args.into_iter().map(|a| a.as_ref().to_string()).collect();
    let mut flags = Vec::new();
    let mut config_file = None;
    let mut i = 0;
    while i < args.len() {
        let Some(flag) = args[i].strip_prefix("--") else {
            return Err(ConfigError::UnexpectedArgument(args[i].clone()));
        };
        let (key, value) = match flag.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                i += 1;
                let v = args
                    .get(i)
                    .ok_or_else(|| ConfigError::FlagWithoutValue(flag.to_string()))?;
                (flag.to_string(), v.clone())
            }
        };
        if key == "config" {
            config_file = Some(PathBuf::from(value));
        } else {
            flags.push((key, value));
        }
        i += 1;
    }
    let mut raw = match config_file {
        Some(path) => RawConfig::read_file(&path)?,
        None => RawConfig::new(),
    };
    for (k, v) in flags {
        raw.set_flag(&k, &v);
    }
    raw.resolve(kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(kind: ExperimentKind, s: &str) -> Result<RunConfig, ConfigError> {
        RawConfig::parse_text(s, Path::new("run.cfg"))?.resolve(kind)
    }

    #[test]
    fn comments_and_defaults() {
        let c = text(ExperimentKind::Brownian, "# bath\ngamma_r = 0.2 # friction\nkT = 0.5\n").unwrap();
        let ExperimentConfig::Brownian(b) = c.experiment else { panic!() };
        assert_eq!(b.kt, 0.5);
        assert_eq!(b.friction.gamma_r, 0.2);
        assert_eq!(b.n_tra, 10_000);
        assert_eq!(c.threads, Threads::Auto);
    }

    #[test]
    fn malformed_line_is_located() {
        let e = text(ExperimentKind::Brownian, "gamma_r = 0.2\nkT 0.5\n").unwrap_err();
        assert!(e.to_string().starts_with("run.cfg:2"), "{e}");
    }

    #[test]
    fn type_errors_name_the_key() {
        let e = text(ExperimentKind::Brownian, "gamma_r = fast\nkT = 0.5\n").unwrap_err();
        assert!(e.to_string().contains("gamma_r"), "{e}");
        let e = text(ExperimentKind::Diffraction, "p = 1\nx_obs = 1\nrecord_every = 0.5\n").unwrap_err();
        assert!(e.to_string().contains("record_every"), "{e}");
    }

    #[test]
    fn duplicates_are_rejected() {
        assert!(matches!(
            text(ExperimentKind::Brownian, "kT = 1\nkT = 2\ngamma_r = 1\n"),
            Err(ConfigError::Duplicate { .. })
        ));
    }

    #[test]
    fn scan_bounds() {
        let c = text(ExperimentKind::Tunneling, "omega = 0.2\nscan = omega0\n").unwrap();
        let ExperimentConfig::Tunneling(t) = c.experiment else { panic!() };
        let s = t.scan.unwrap();
        assert_eq!((s.lo, s.hi, s.points), (0.0, 3.0 * 0.2, 61));
        assert!(text(ExperimentKind::Tunneling, "omega = 0.2\nscan = e0\n").is_err());
        assert!(text(ExperimentKind::Tunneling, "omega = 0.2\nscan = e0\nscan_lo = 0\nscan_hi = 0.1\n").is_ok());
    }

    #[test]
    fn barrier_times() {
        let base = "gamma_r = 0.1\nkT = 2\n";
        let bt = |line: &str| {
            let c = text(ExperimentKind::EarlyArrivals, &format!("{base}{line}")).map(|c| c.experiment);
            match c {
                Ok(ExperimentConfig::EarlyArrivals(e)) => Ok(e.barrier_time),
                Ok(_) => unreachable!(),
                Err(e) => Err(e),
            }
        };
        assert_eq!(bt("").unwrap(), BarrierTime::MultipleOfTb(3.0));
        assert_eq!(bt("t_barrier = 2.5t_b").unwrap(), BarrierTime::MultipleOfTb(2.5));
        assert_eq!(bt("t_barrier = 7").unwrap(), BarrierTime::Value(7.0));
        // q_dot0 = 0 by default, so the free path never reaches the barrier
        assert!(bt("t_barrier = free_path").is_err());
        assert_eq!(
            bt("t_barrier = free_path\nq_dot0 = 1").unwrap(),
            BarrierTime::FreePath
        );
    }

    #[test]
    fn experiment_key_must_match() {
        assert!(text(ExperimentKind::Diffraction, "experiment = diffraction\np = 1\nx_obs = 1\n").is_ok());
        assert!(text(ExperimentKind::Diffraction, "experiment = brownian\np = 1\nx_obs = 1\n").is_err());
    }

    #[test]
    fn args_with_equals_and_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.cfg");
        std::fs::write(&path, "p = 2\nx_obs = 1\n").unwrap();
        let c = parse_args(
            ExperimentKind::Diffraction,
            ["--config", path.to_str().unwrap(), "--p=3", "--threads", "2"],
        )
        .unwrap();
        let ExperimentConfig::Diffraction(d) = c.experiment else { panic!() };
        assert_eq!(d.p, 3.0);
        assert_eq!(c.threads, Threads::Fixed(2));
        assert!(matches!(
            parse_args(ExperimentKind::Diffraction, ["--p"]),
            Err(ConfigError::FlagWithoutValue(_))
        ));
        assert!(parse_args(ExperimentKind::Diffraction, ["stray"]).is_err());
    }
}
