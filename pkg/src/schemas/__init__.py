"""Pydantic models for every JSON file the lab reads or writes."""
