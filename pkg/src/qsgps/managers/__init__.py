"""
Manager modules dispatching attack variants and CLI subcommands.

Each manager is responsible for one kind of item.
"""
