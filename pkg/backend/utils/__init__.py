"""Utilities for zipflaws"""
