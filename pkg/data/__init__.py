"""Pydantic models for reports, fixtures and experiment configs."""
