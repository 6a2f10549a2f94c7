//! Data-driven prover registry.
//!
//! The registry file is INI-style key-value text:
//!
//! ```text
//! [meancop]
//! path = meancop
//! args = --conj {file}
//! timeout = 30
//! ```
//!
//! `args` is a whitespace-split template; `{file}` is replaced by the TPTP
//! problem path (and appended when absent). The `HYLOC_PROVERS` environment
//! variable names the registry file; without it, well-known SZS provers are
//! probed on PATH.

use indexmap::IndexMap;
use std::path::{Path, PathBuf};
use std::time::Duration;
use thiserror::Error;

pub const PROVERS_ENV: &str = "HYLOC_PROVERS";

const DEFAULT_TIMEOUT_SECS: u64 = 30;

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("cannot read registry file `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{file}:{line}: {message}")]
    Malformed {
        file: String,
        line: usize,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProverConfig {
    pub id: String,
    pub path: PathBuf,
    pub args: Vec<String>,
    pub timeout: Duration,
}

impl ProverConfig {
    pub fn new(id: impl Into<String>, path: impl Into<PathBuf>) -> ProverConfig {
        ProverConfig {
            id: id.into(),
            path: path.into(),
            args: vec!["{file}".into()],
            timeout: Duration::from_secs(DEFAULT_TIMEOUT_SECS),
        }
    }

    /// Command-line arguments with the problem path substituted.
    pub fn render_args(&self, problem: &Path) -> Vec<String> {
        let problem = problem.display().to_string();
        let mut out: Vec<String> = Vec::with_capacity(self.args.len() + 1);
        let mut substituted = false;
        for arg in &self.args {
            if arg.contains("{file}") {
                out.push(arg.replace("{file}", &problem));
                substituted = true;
            } else {
                out.push(arg.clone());
            }
        }
        if !substituted {
            out.push(problem);
        }
        out
    }
}

#[derive(Debug, Clone, Default)]
pub struct ProverRegistry {
    pub provers: IndexMap<String, ProverConfig>,
}

impl ProverRegistry {
    pub fn load(path: &Path) -> Result<ProverRegistry, RegistryError> {
        let text = std::fs::read_to_string(path).map_err(|source| RegistryError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, file: &str) -> Result<ProverRegistry, RegistryError> {
        let mut registry = ProverRegistry::default();
        let mut current: Option<ProverConfig> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(section) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                if let Some(cfg) = current.take() {
                    registry.provers.insert(cfg.id.clone(), cfg);
                }
                let id = section.trim();
                if id.is_empty() {
                    return Err(RegistryError::Malformed {
                        file: file.to_string(),
                        line: lineno,
                        message: "empty prover id".into(),
                    });
                }
                current = Some(ProverConfig::new(id, id));
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| RegistryError::Malformed {
                file: file.to_string(),
                line: lineno,
                message: format!("expected `key = value`, found `{line}`"),
            })?;
            let cfg = current.as_mut().ok_or_else(|| RegistryError::Malformed {
                file: file.to_string(),
                line: lineno,
                message: "key outside a [prover] section".into(),
            })?;
            let value = value.trim();
            match key.trim() {
                "path" => cfg.path = PathBuf::from(value),
                "args" => cfg.args = value.split_whitespace().map(String::from).collect(),
                "timeout" => {
                    let secs: u64 = value.parse().map_err(|_| RegistryError::Malformed {
                        file: file.to_string(),
                        line: lineno,
                        message: format!("timeout must be a positive integer, found `{value}`"),
                    })?;
                    if secs == 0 {
                        return Err(RegistryError::Malformed {
                            file: file.to_string(),
                            line: lineno,
                            message: "timeout must be positive".into(),
                        });
                    }
                    cfg.timeout = Duration::from_secs(secs);
                }
                other => {
                    return Err(RegistryError::Malformed {
                        file: file.to_string(),
                        line: lineno,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        if let Some(cfg) = current.take() {
            registry.provers.insert(cfg.id.clone(), cfg);
        }
        Ok(registry)
    }

    /// Probes PATH for well-known SZS-compliant provers.
    pub fn discover() -> ProverRegistry {
        let mut registry = ProverRegistry::default();
        let candidates: [(&str, &[&str]); 3] = [
            ("eprover", &["--auto", "--silent", "--tstp-format", "{file}"]),
            ("vampire", &["{file}"]),
            ("meancop", &["--conj", "{file}"]),
        ];
        for (id, args) in candidates {
            if let Some(path) = find_on_path(id) {
                let mut cfg = ProverConfig::new(id, path);
                cfg.args = args.iter().map(|s| s.to_string()).collect();
                registry.provers.insert(id.to_string(), cfg);
            }
        }
        registry
    }

    /// `HYLOC_PROVERS` registry when set, PATH discovery otherwise.
    pub fn from_env() -> Result<ProverRegistry, RegistryError> {
        match std::env::var_os(PROVERS_ENV) {
            Some(path) => Self::load(Path::new(&path)),
            None => Ok(Self::discover()),
        }
    }

    pub fn get(&self, id: &str) -> Option<&ProverConfig> {
        self.provers.get(id)
    }

    /// First configured prover, used when no `--prover` is requested.
    pub fn default_prover(&self) -> Option<&ProverConfig> {
        self.provers.values().next()
    }
}

fn find_on_path(name: &str) -> Option<PathBuf> {
    let path = std::env::var_os("PATH")?;
    for dir in std::env::split_paths(&path) {
        let candidate = dir.join(name);
        if is_executable(&candidate) {
            return Some(candidate);
        }
    }
    None
}

#[cfg(unix)]
fn is_executable(path: &Path) -> bool {
    use std::os::unix::fs::PermissionsExt;
    path.metadata()
        .map(|m| m.is_file() && m.permissions().mode() & 0o111 != 0)
        .unwrap_or(false)
}

#[cfg(not(unix))]
fn is_executable(path: &Path) -> bool {
    path.is_file()
}
