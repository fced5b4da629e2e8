use std::collections::HashMap;
use std::sync::RwLock;

use thiserror::Error;

use super::Generator;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvError {
    #[error("generators are born at level 1 or above, got {0}")]
    LevelZero(u32),
    #[error("generator {name} is already registered at level {level} with rank {rank}")]
    Conflict { name: String, level: u32, rank: u32 },
    #[error("level {level} rank {rank} is already taken by {name}")]
    RankTaken { name: String, level: u32, rank: u32 },
    #[error("unknown generator {0}")]
    Unknown(String),
}

#[derive(Debug, Default)]
struct Registry {
    by_name: HashMap<String, Generator>,
    by_slot: HashMap<(u32, u32), String>,
    per_level: HashMap<u32, u32>,
}

/// Append-only generator registry. Lookups take a shared lock, registration
/// an exclusive one.
#[derive(Debug, Default)]
pub struct GeneratorEnv {
    inner: RwLock<Registry>,
}

impl GeneratorEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<Generator> {
        self.inner
            .read()
            .expect("registry lock")
            .by_name
            .get(name)
            .cloned()
    }

    /// Registers `name` at `level`. Without an explicit rank the generator
    /// goes after every generator already registered at that level.
    /// Re-registering with identical data returns the existing generator.
    pub fn register(
        &self,
        name: &str,
        level: u32,
        rank: Option<u32>,
    ) -> Result<Generator, EnvError> {
        if level == 0 {
            return Err(EnvError::LevelZero(level));
        }
        let mut reg = self.inner.write().expect("registry lock");
        if let Some(existing) = reg.by_name.get(name) {
            let same =
                existing.birth_level() == level && rank.is_none_or(|r| r == existing.base_rank());
            return if same {
                Ok(existing.clone())
            } else {
                Err(EnvError::Conflict {
                    name: name.to_string(),
                    level: existing.birth_level(),
                    rank: existing.base_rank(),
                })
            };
        }
        let rank = match rank {
            Some(r) => r,
            None => {
                let mut r = reg.per_level.get(&level).copied().unwrap_or(0);
                while reg.by_slot.contains_key(&(level, r)) {
                    r += 1;
                }
                r
            }
        };
        if let Some(other) = reg.by_slot.get(&(level, rank)) {
            return Err(EnvError::RankTaken {
                name: other.clone(),
                level,
                rank,
            });
        }
        let g = Generator::new(name, level, rank);
        reg.by_slot.insert((level, rank), name.to_string());
        let next = reg.per_level.entry(level).or_insert(0);
        *next = (*next).max(rank + 1);
        reg.by_name.insert(name.to_string(), g.clone());
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.inner.read().expect("registry lock").by_name.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn generators(&self) -> Vec<Generator> {
        let mut all: Vec<_> = self
            .inner
            .read()
            .expect("registry lock")
            .by_name
            .values()
            .cloned()
            .collect();
        all.sort();
        all
    }
}
