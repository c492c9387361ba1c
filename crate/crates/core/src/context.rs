//! Shared per-root-system state: the algebra, its Weyl group, and a module cache.

use std::sync::Arc;

use crate::chevalley::ChevalleyAlgebra;
use crate::error::Result;
use crate::repn::{HighestWeightModule, ModuleCache, DEFAULT_DIM_CEILING};
use crate::rootsys::{RootSystem, RootSystemSpec, Weight};
use crate::weyl::{WeylGroup, DEFAULT_WEYL_CEILING};

pub struct Context {
    pub alg: ChevalleyAlgebra,
    pub weyl: WeylGroup,
    pub cache: ModuleCache,
}

impl Context {
    pub fn new(spec: &RootSystemSpec) -> Result<Self> {
        Self::with_ceilings(spec, DEFAULT_DIM_CEILING, DEFAULT_WEYL_CEILING)
    }

    pub fn with_ceilings(spec: &RootSystemSpec, dim_ceiling: usize, weyl_ceiling: u128) -> Result<Self> {
        let rs = RootSystem::build(spec)?;
        let weyl = WeylGroup::enumerate_with_ceiling(&rs, None, weyl_ceiling)?;
        let alg = ChevalleyAlgebra::build(&rs)?;
        Ok(Self {
            alg,
            weyl,
            cache: ModuleCache::with_ceiling(dim_ceiling),
        })
    }

    pub fn parse(spec: &str) -> Result<Self> {
        Self::new(&spec.parse()?)
    }

    pub fn rs(&self) -> &RootSystem {
        self.alg.root_system()
    }

    pub fn module(&self, lambda: &Weight) -> Result<Arc<HighestWeightModule>> {
        self.cache.get(&self.alg, lambda)
    }
}
