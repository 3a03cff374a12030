pub mod algebra;
pub mod blowup;
pub mod example;
pub mod hypersurface;
pub mod cli;
pub mod maps;
pub mod verify;
