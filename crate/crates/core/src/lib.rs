pub mod gfield;
pub mod polyring;
pub mod models;
pub mod autgrp;
pub mod placecount;
pub mod numsg;
pub mod isocls;
pub mod suite;
