use std::io::Read;

use clap::{Args, ValueEnum};
use ndl_core::{generate, read_edge_list, Graph, GraphFamily, GraphFamilySpec};

use crate::{Failure, InputArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Paley,
    RandomRegular,
    Complete,
    Cycle,
    Petersen,
    Circulant,
}

/// Generator flags. `--seed` only matters for `random-regular`.
#[derive(Debug, Default, Args)]
pub struct GeneratorArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Prime order of a Paley graph.
    #[arg(long)]
    pub q: Option<usize>,
    /// Circulant offsets, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub connections: Vec<usize>,
}

impl GeneratorArgs {
    fn given(&self) -> bool {
        self.family.is_some()
            || self.n.is_some()
            || self.d.is_some()
            || self.q.is_some()
            || !self.connections.is_empty()
    }

    fn family(&self) -> Result<Option<GraphFamily>, Failure> {
        let Some(family) = self.family else {
            return if self.given() {
                Err(Failure::Usage("generator flags need --family".into()))
            } else {
                Ok(None)
            };
        };
        let need = |v: Option<usize>, flag: &str| {
            v.ok_or_else(|| Failure::Usage(format!("--family {family:?} needs --{flag}").to_lowercase()))
        };
        Ok(Some(match family {
            FamilyArg::Paley => GraphFamily::Paley { q: need(self.q, "q")? },
            FamilyArg::RandomRegular => GraphFamily::RandomRegular { n: need(self.n, "n")?, d: need(self.d, "d")? },
            FamilyArg::Complete => GraphFamily::Complete { n: need(self.n, "n")? },
            FamilyArg::Cycle => GraphFamily::Cycle { n: need(self.n, "n")? },
            FamilyArg::Petersen => GraphFamily::Petersen,
            FamilyArg::Circulant => {
                if self.connections.is_empty() {
                    return Err(Failure::Usage("--family circulant needs --connections".into()));
                }
                GraphFamily::Circulant { n: need(self.n, "n")?, connections: self.connections.clone() }
            }
        }))
    }

    /// The generated graph, or `None` when no generator flag was given.
    pub(crate) fn generate(&self, seed: u64) -> Result<Option<Graph>, Failure> {
        match self.family()? {
            Some(f) => Ok(Some(generate(&GraphFamilySpec::with_seed(f, seed))?)),
            None => Ok(None),
        }
    }
}

impl InputArgs {
    /// Exactly one of the file and the generator flags must be present.
    pub(crate) fn load(&self, seed: u64) -> Result<Graph, Failure> {
        match (&self.input, self.generator.given()) {
            (Some(_), true) => Err(Failure::Usage("give an input file or generator flags, not both".into())),
            (None, false) => Err(Failure::Usage("no input: give an edge-list file or --family".into())),
            (None, true) => Ok(self.generator.generate(seed)?.expect("generator flags present")),
            (Some(path), false) => {
                let mut text = String::new();
                let res = if path.as_os_str() == "-" {
                    std::io::stdin().read_to_string(&mut text).map(|_| ())
                } else {
                    std::fs::read_to_string(path).map(|t| text = t)
                };
                res.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                Ok(read_edge_list(&text)?)
            }
        }
    }
}
