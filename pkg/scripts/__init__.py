"""Command-line front end (`qlw`)."""
