"""Experiment harness: multi-run curves, averaged PDFs, theory checks, CLI."""
