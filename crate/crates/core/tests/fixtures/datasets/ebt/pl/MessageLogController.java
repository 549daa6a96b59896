public class MessageLogController {
    public void exportLog(Log log) {
        logStore.export(log);
    }
    public void removeLog(Log log) {
        logStore.remove(log);
    }
}
