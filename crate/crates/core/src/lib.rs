//! Finite-geometry workbench for linear representations.

pub mod claims;
pub mod geomaut;
pub mod gf;
pub mod graphauto;
pub mod linrep;
pub mod permgrp;
pub mod pointsets;
pub mod projspace;
