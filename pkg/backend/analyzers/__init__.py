"""Analysis stages for zipflaws"""
