fn main() -> std::process::ExitCode {
    pmflab::cli::run(std::env::args_os())
}
