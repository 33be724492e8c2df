"""Monitoring and metrics module."""
