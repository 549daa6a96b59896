public class LogNotificationAction {
    public void editNotification(Notification notification) {
        notificationStore.edit(notification);
    }
    public void removeLog(Log log) {
        logStore.remove(log);
    }
}
