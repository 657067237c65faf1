//! Minimal `--key value` / `--key=value` flag parsing.

use hdr_core::error::{Error, Result};

pub struct Flags {
    /// (name, value) pairs; switches carry an empty value marker.
    entries: Vec<(String, Option<String>)>,
    taken: Vec<bool>,
}

impl Flags {
    pub fn new(args: &[String]) -> Flags {
        let mut entries = Vec::new();
        let mut i = 0;
        while i < args.len() {
            let arg = &args[i];
            if let Some(raw) = arg.strip_prefix("--") {
                if let Some((k, v)) = raw.split_once('=') {
                    entries.push((k.to_string(), Some(v.to_string())));
                } else {
                    let value = match args.get(i + 1) {
                        Some(next) if !next.starts_with("--") => {
                            i += 1;
                            Some(next.clone())
                        }
                        _ => None,
                    };
                    entries.push((raw.to_string(), value));
                }
            } else {
                entries.push((arg.clone(), None));
            }
            i += 1;
        }
        let taken = vec![false; entries.len()];
        Flags { entries, taken }
    }

    /// Value flag; `Ok(None)` when absent, error when present without value.
    pub fn take_value(&mut self, name: &str) -> Result<Option<String>> {
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if self.taken[i] || k != name {
                continue;
            }
            self.taken[i] = true;
            return match v {
                Some(v) => Ok(Some(v.clone())),
                None => Err(Error::contract(format!("missing value for --{name}"))),
            };
        }
        Ok(None)
    }

    pub fn require_value(&mut self, name: &str) -> Result<String> {
        self.take_value(name)?
            .ok_or_else(|| Error::contract(format!("missing required flag --{name}")))
    }

    /// Boolean switch; consumes it and returns whether it was present.
    pub fn take_switch(&mut self, name: &str) -> bool {
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if self.taken[i] || k != name {
                continue;
            }
            // A switch takes no value; if one was grabbed it stays unused and
            // finish() will flag it. Tolerate the common `--flag true` form.
            let _ = v;
            self.taken[i] = true;
            return true;
        }
        false
    }

    /// Errors on any flag that no command consumed.
    pub fn finish(self) -> Result<()> {
        for (i, (k, _)) in self.entries.iter().enumerate() {
            if !self.taken[i] {
                return Err(Error::contract(format!("unknown or misplaced argument '{k}'")));
            }
        }
        Ok(())
    }
}

pub fn parse<T>(value: &str, flag: &str) -> Result<T>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::contract(format!("invalid value for {flag}: '{value}' ({e})")))
}
