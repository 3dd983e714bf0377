fn main() -> std::process::ExitCode {
    reuleaux::cli::run(std::env::args_os())
}
