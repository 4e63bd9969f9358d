fn main() -> std::process::ExitCode {
    triadic_net::cli::main()
}
