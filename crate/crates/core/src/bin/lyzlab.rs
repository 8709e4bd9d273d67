fn main() -> std::process::ExitCode {
    lyzlab::cli::main()
}
