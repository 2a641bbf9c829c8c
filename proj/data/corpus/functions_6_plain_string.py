# exercise: functions
# pattern: semantic
def greet(name):
    print("Hello, {name}!")

greet("Ada")
