"""Configuration module for horocurv"""
