fn main() -> std::process::ExitCode {
    drinfeld_survey::cli::main()
}
