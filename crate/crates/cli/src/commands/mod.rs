pub mod payoff;
pub mod price;
pub mod project;
pub mod regress;
pub mod replay;
