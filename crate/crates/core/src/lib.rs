pub mod cli;
pub mod oracle;
pub mod recognition;
pub mod seaweed;
pub mod semilocal;
pub mod slp;
