# Subcommands are discovered by src.command_manager
