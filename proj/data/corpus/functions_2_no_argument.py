# exercise: functions
# pattern: argument-count
def greet(name):
    print(f"Hello, {name}!")

greet()
