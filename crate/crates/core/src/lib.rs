pub mod cli;
pub mod dyadic;
pub mod element;
pub mod error;
pub mod generators;
pub mod metrics;
pub mod normal_form;
pub mod render;
pub mod tree;
