#![allow(dead_code)]

pub mod props;
pub mod sat_latin;
